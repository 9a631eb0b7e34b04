#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "tm2/errors.hpp"

namespace tm2 {

// Resolves the resource URIs used throughout the framework (corpora, word
// lists, gold standards). file: and http(s): schemes are supported; a bare
// path is treated as a local file.
class ResourceResolver {
 public:
  virtual ~ResourceResolver() = default;

  virtual std::string fetch(const std::string& uri) const {
    if (uri.rfind("http://", 0) == 0 || uri.rfind("https://", 0) == 0)
      return fetch_http(uri);
    std::string path = uri;
    if (uri.rfind("file://", 0) == 0)
      path = uri.substr(7);
    else if (uri.rfind("file:", 0) == 0)
      path = uri.substr(5);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot read resource: " + uri);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 protected:
  // Split out so the HTTP dependency is only pulled in where needed; see
  // tm2/resource_http.hpp.
  virtual std::string fetch_http(const std::string& uri) const {
    throw ResourceError("http resources not enabled for: " + uri);
  }
};

inline const ResourceResolver& default_resolver() {
  static ResourceResolver r;
  return r;
}

}  // namespace tm2
