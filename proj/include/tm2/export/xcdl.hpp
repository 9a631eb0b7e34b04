#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "tm2/errors.hpp"
#include "tm2/export/xml.hpp"

namespace tm2 {

inline constexpr const char* kXcdlNamespace =
    "http://www.planets-project.eu/xcl/schemas/xcl";

// Transforms an export document into XCDL characterization form: the corpus
// reference becomes normData, every annotation one valueSet under a single
// textualAnnotation property plus one propertySet carrying its span. Ids are
// 1-based over all annotations in document order; byte-deterministic.
inline std::string xcdl_from_export(const std::string& export_xml) {
  detail::XmlNode root = parse_export(export_xml);

  std::string value_sets;
  std::string property_sets;
  size_t n = 0;
  for (const auto& agent : root.children) {
    for (const auto& a : agent.children) {
      ++n;
      const std::string id = std::to_string(n);
      value_sets += "        <valueSet id=\"i_i1_i36_i1_i" + id + "\">\n";
      value_sets += "          <labValue> <val>" +
                    detail::xml_escape(a.attrs.at("label")) +
                    "</val> <type>string</type> </labValue>\n";
      value_sets += "          <dataRef ind=\"normSpecific\" propertySetId="
                    "\"id_" + id + "\"/>\n";
      value_sets += "        </valueSet>\n";
      property_sets += "      <propertySet id=\"id_" + id + "\">\n";
      property_sets += "        <valueSetRelations> <ref valueSetId=\"i_i1_"
                       "i36_i1_i" + id + "\" name=\"textualAnnotation\"/> "
                       "</valueSetRelations>\n";
      property_sets += "        <dataRef> <ref begin=\"" +
                       a.attrs.at("start") + "\" end=\"" + a.attrs.at("end") +
                       "\" id=\"nd1\"/> </dataRef>\n";
      property_sets += "      </propertySet>\n";
    }
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<xcdl xmlns=\"";
  out += kXcdlNamespace;
  out += "\" id=\"0\">\n";
  out += "  <object id=\"o1\">\n";
  out += "    <normData type=\"text\" id=\"nd1\">" +
         detail::xml_escape(root.attrs.at("data")) + "</normData>\n";
  out += "    <property id=\"p1\" source=\"raw\" cat=\"descr\">\n";
  out += "      <name id=\"id58\">textualAnnotation</name>\n";
  out += value_sets;
  out += "    </property>\n";
  out += property_sets;
  out += "  </object>\n";
  out += "</xcdl>\n";
  return out;
}

inline void xcdl_write(const std::string& export_xml,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path.string());
  out << xcdl_from_export(export_xml);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tm2
