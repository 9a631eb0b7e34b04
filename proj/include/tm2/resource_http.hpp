#pragma once

#include <string>

#include "httplib.h"
#include "tm2/resource.hpp"

namespace tm2 {

// Resolver with http(s): support via cpp-httplib. Kept out of the default
// resolver so that offline builds don't need the header.
class HttpResourceResolver : public ResourceResolver {
 protected:
  std::string fetch_http(const std::string& uri) const override {
    auto scheme_end = uri.find("://");
    auto path_start = uri.find('/', scheme_end + 3);
    std::string host = uri.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/"
                                                       : uri.substr(path_start);
    httplib::Client client(host);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res || res->status != 200)
      throw ResourceError("cannot fetch resource: " + uri);
    return res->body;
  }
};

}  // namespace tm2
