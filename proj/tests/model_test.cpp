#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "xdgdl/model.hpp"

namespace {

using namespace xdgdl;
using namespace xdgdl_test;

std::string wrap(const std::string& types, const std::string& island = "<ISLAND NAME=\"i\"></ISLAND>",
                 const std::string& before = "") {
  return "<PARSTORAGE VERSION=\"1.0\" TIMESTAMP=\"t\">" + before + types + island + "</PARSTORAGE>";
}

const std::string kChar = "<TYPE><ETYPE TYPE=\"CHAR\" LENGTH=\"1\"/></TYPE>";

ValidationReport report_for(const std::string& text) {
  try {
    return validate_document(parse_document(text));
  } catch (const ValidationError& e) {
    return e.report();
  }
}

TEST(parse_document, two_server_listing) {
  Document doc = load_document("two_server.xml");
  EXPECT_EQ(doc.version, "1.0");
  EXPECT_EQ(doc.timestamp, "testfile_regular");
  ASSERT_EQ(doc.types.size(), 1u);
  const auto& etype = std::get<EtypeDecl>(doc.types[0].members.at(0));
  EXPECT_EQ(etype.base, "CHAR");
  EXPECT_EQ(etype.length, 1);
  EXPECT_EQ(doc.island.name, "island1.pri.univie.ac.at");
  ASSERT_EQ(doc.island.servers.size(), 2u);
  EXPECT_EQ(doc.island.servers[1].host, "vipclus9.pri.univie.ac.at");
  const ViewDecl* v = doc.island.servers[0].devices.at(0).view();
  ASSERT_NE(v, nullptr);
  EXPECT_EQ(v->skip, 7);
  ASSERT_EQ(v->blocks.size(), 1u);
  EXPECT_EQ(v->blocks[0].repeat, 3);
  EXPECT_EQ(v->blocks[0].count, 5);
  EXPECT_EQ(v->blocks[0].stride, 7);
  EXPECT_EQ(v->blocks[0].nested_view(), nullptr);
  EXPECT_TRUE(validate_document(doc).empty());
}

TEST(parse_document, three_server_listing_nests_views) {
  Document doc = load_document("three_server.xml");
  ASSERT_EQ(doc.island.servers.size(), 3u);
  const ViewDecl* outer = doc.island.servers[0].devices.at(0).view();
  const ViewDecl* inner = outer->blocks.at(0).nested_view();
  ASSERT_NE(inner, nullptr);
  EXPECT_EQ(inner->blocks.at(0).count, 5);
  EXPECT_EQ(device_count(doc), 3u);
  EXPECT_TRUE(validate_document(doc).empty());
}

TEST(parse_document, defaults_for_implied_attributes) {
  Document doc = parse_document(wrap(
      "<TYPE><ARRAY><TYPE><ETYPE TYPE=\"INT\" LENGTH=\"4\"/></TYPE><DIMENSION UPPER=\"8\"/></ARRAY></TYPE>",
      "<ISLAND NAME=\"i\"></ISLAND>", "<PROCESSORS NAME=\"p\"><PROC_DIMENSION UPPER=\"4\"/></PROCESSORS>"));
  EXPECT_EQ(doc.processors.at(0).dims.at(0).lower, 1);
  const auto& array = std::get<ArrayDecl>(doc.types.at(0).members.at(0));
  EXPECT_EQ(array.major, Major::Row);
  EXPECT_FALSE(array.distribute_onto);
  EXPECT_EQ(array.dims.at(0).lower, 1);
  EXPECT_EQ(array.dims.at(0).dist_skalar, 1);
  EXPECT_EQ(array.dims.at(0).distribute, Distribution::Unspecified);
}

TEST(parse_document, array_accepts_single_type_then_dimensions) {
  const std::string elem = "<TYPE><ETYPE TYPE=\"INT\" LENGTH=\"4\"/></TYPE>";
  Document one = parse_document(wrap("<TYPE><ARRAY>" + elem + "<DIMENSION UPPER=\"2\"/><DIMENSION UPPER=\"3\"/></ARRAY></TYPE>"));
  Document repeated = parse_document(wrap("<TYPE><ARRAY>" + elem + "<DIMENSION UPPER=\"2\"/>" + elem +
                                          "<DIMENSION UPPER=\"3\"/></ARRAY></TYPE>"));
  EXPECT_EQ(one, repeated);
  EXPECT_EQ(std::get<ArrayDecl>(one.types[0].members[0]).dims.size(), 2u);
}

TEST(parse_document, array_element_types_must_agree) {
  auto r = report_for(wrap(
      "<TYPE><ARRAY><TYPE><ETYPE TYPE=\"INT\" LENGTH=\"4\"/></TYPE><DIMENSION UPPER=\"2\"/>"
      "<TYPE><ETYPE TYPE=\"INT\" LENGTH=\"8\"/></TYPE><DIMENSION UPPER=\"3\"/></ARRAY></TYPE>"));
  EXPECT_TRUE(r.has_rule(rules::kContentModel));
}

TEST(parse_document, integer_syntax) {
  auto with_stride = [](const std::string& stride) {
    return wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"><DEVICE DEVICE_ID=\"d\"><VIEW SKIP_HEADER=\"0\" "
                       "SKIP=\"0\"><BLOCK OFFSET=\"0\" REPEAT=\"1\" COUNT=\"1\" STRIDE=\"" +
                           stride + "\"><BYTEBLOCK/></BLOCK></VIEW></DEVICE></SERVER></ISLAND>");
  };
  EXPECT_EQ(parse_document(with_stride("007")).island.servers[0].devices[0].view()->blocks[0].stride, 7);
  for (const char* bad : {"+1", "1.5", "", " ", "0x10", "99999999999999999999", "1e3"}) {
    EXPECT_TRUE(report_for(with_stride(bad)).has_rule(rules::kIntegerSyntax)) << bad;
  }
}

TEST(parse_document, reports_paths) {
  auto r = report_for(wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"a\"/><SERVER><DEVICE DEVICE_ID=\"d\"><NOVIEW/>"
                                  "</DEVICE></SERVER></ISLAND>"));
  ASSERT_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations) {
    if (v.rule == rules::kRequiredAttribute) {
      EXPECT_EQ(v.path, "/PARSTORAGE/ISLAND/SERVER[2]/@HOST");
      found = true;
    }
  }
  EXPECT_TRUE(found) << r.to_string();
}

TEST(parse_document, structural_rules) {
  struct rule_case {
    std::string text;
    std::string_view rule;
  };
  const std::vector<rule_case> cases = {
      {"<STORAGE VERSION=\"1\" TIMESTAMP=\"t\"/>", rules::kRootElement},
      {wrap(kChar + "<WIDGET/>"), rules::kUnknownElement},
      {wrap("<TYPE BOGUS=\"1\"><ETYPE TYPE=\"CHAR\" LENGTH=\"1\"/></TYPE>"), rules::kUnknownAttribute},
      {wrap(kChar + "stray"), rules::kUnexpectedText},
      {wrap(kChar, "<ISLAND NAME=\"i\"></ISLAND>", "<ISLAND NAME=\"j\"></ISLAND>"), rules::kContentModel},
      {wrap("<TYPE><ARRAY MAJOR=\"DIAGONAL\"><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE><DIMENSION "
            "UPPER=\"1\"/></ARRAY></TYPE>"),
       rules::kEnumeratedValue},
      {wrap("<TYPE><ARRAY><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE><DIMENSION UPPER=\"1\" "
            "DISTRIBUTE=\"RANDOM\"/></ARRAY></TYPE>"),
       rules::kEnumeratedValue},
      {wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"><DEVICE DEVICE_ID=\"d\"></DEVICE></SERVER></ISLAND>"),
       rules::kDeviceAccess},
      {wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"><DEVICE DEVICE_ID=\"d\"><NOVIEW/><NOVIEW/></DEVICE>"
                   "</SERVER></ISLAND>"),
       rules::kDeviceAccess},
      {wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"><DEVICE DEVICE_ID=\"d\"><VIEW SKIP_HEADER=\"0\" "
                   "SKIP=\"0\"><BLOCK OFFSET=\"0\" REPEAT=\"1\" COUNT=\"1\" STRIDE=\"0\"/></VIEW></DEVICE>"
                   "</SERVER></ISLAND>"),
       rules::kBlockChild},
      {wrap(""), rules::kDocumentRequiresType},
      {wrap("<TYPE/>"), rules::kTypeRequiresChild},
      {wrap("<TYPE><ARRAY><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE></ARRAY></TYPE>"),
       rules::kArrayRequiresDimension},
      {wrap("<TYPE><ARRAY><DIMENSION UPPER=\"1\"/><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE></ARRAY></TYPE>"),
       rules::kContentModel},
      {wrap(kChar, "<ISLAND NAME=\"i\"></ISLAND>", "<PROCESSORS NAME=\"p\"/>"),
       rules::kProcessorsRequiresDimension},
      {wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"><DEVICE DEVICE_ID=\"d\"><VIEW SKIP_HEADER=\"0\" "
                   "SKIP=\"0\"></VIEW></DEVICE></SERVER></ISLAND>"),
       rules::kViewRequiresBlock},
      {wrap(kChar + "<ALIGN WHAT=\"nothing\" WITH=\"nowhere\"/>"), rules::kUnresolvedReference},
      {wrap("<TYPE><ARRAY DISTRIBUTE_ONTO=\"ghost\"><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE><DIMENSION "
            "UPPER=\"1\"/></ARRAY></TYPE>"),
       rules::kUnresolvedReference},
      {wrap("<TYPE><ARRAY><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE><DIMENSION LOWER=\"5\" "
            "UPPER=\"1\"/></ARRAY></TYPE>"),
       rules::kBoundOrder},
      {wrap("<TYPE><ARRAY><TYPE><ETYPE TYPE=\"C\" LENGTH=\"1\"/></TYPE><DIMENSION UPPER=\"3\" "
            "DIST_SKALAR=\"0\"/></ARRAY></TYPE>"),
       rules::kPositive},
      {"<PARSTORAGE VERSION=\"1.0\" TIMESTAMP=\"a b\">" + kChar + "<ISLAND NAME=\"i\"></ISLAND></PARSTORAGE>",
       rules::kIdSyntax},
      {"<PARSTORAGE VERSION=\"\" TIMESTAMP=\"t\">" + kChar + "<ISLAND NAME=\"i\"></ISLAND></PARSTORAGE>",
       rules::kRequiredAttribute},
  };
  for (const auto& c : cases) {
    auto r = report_for(c.text);
    EXPECT_FALSE(r.ok()) << c.text;
    EXPECT_TRUE(r.has_rule(c.rule)) << c.rule << " for " << c.text << "\n" << r.to_string();
  }
}

TEST(parse_document, malformed_xml_is_a_parse_error) {
  EXPECT_THROW(parse_document("<PARSTORAGE"), ParseError);
}

TEST(validate_document, warnings_do_not_fail) {
  auto r = validate_document(parse_document(
      wrap(kChar, "<ISLAND NAME=\"i\"><SERVER HOST=\"h\"></SERVER></ISLAND>")));
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.has_rule(rules::kServerWithoutDevices));
  auto empty = validate_document(parse_document(wrap(kChar)));
  EXPECT_TRUE(empty.ok());
  EXPECT_TRUE(empty.has_rule(rules::kIslandWithoutServers));
  EXPECT_EQ(empty.error_count(), 0u);
}

TEST(validate_document, align_resolves_against_declared_names) {
  auto r = validate_document(parse_document(wrap(
      "<TYPE NAME=\"grid\"><ETYPE TYPE=\"C\" LENGTH=\"1\" NAME=\"cell\"/></TYPE><ALIGN WHAT=\"cell\" WITH=\"p\"/>",
      "<ISLAND NAME=\"i\"></ISLAND>", "<PROCESSORS NAME=\"p\"><PROC_DIMENSION UPPER=\"2\"/></PROCESSORS>")));
  EXPECT_TRUE(r.ok()) << r.to_string();
}

TEST(validate_document, in_memory_ranges) {
  Document doc = load_document("two_server.xml");
  auto& view = std::get<ViewDecl>(doc.island.servers[0].devices[0].access);
  view.blocks[0].count = 0;
  view.skip = -3;
  doc.island.servers[1].host.clear();
  auto r = validate_document(doc);
  EXPECT_EQ(r.error_count(), 3u) << r.to_string();
  EXPECT_TRUE(r.has_rule(rules::kPositive));
  EXPECT_TRUE(r.has_rule(rules::kNonnegative));
  EXPECT_TRUE(r.has_rule(rules::kRequiredAttribute));
  EXPECT_THROW(serialize_document(doc), Error);
}

TEST(is_xml_id, accepts_and_rejects) {
  EXPECT_TRUE(is_xml_id("testfile_regular"));
  EXPECT_TRUE(is_xml_id("_x.1-2"));
  EXPECT_FALSE(is_xml_id(""));
  EXPECT_FALSE(is_xml_id("1abc"));
  EXPECT_FALSE(is_xml_id("a b"));
  EXPECT_FALSE(is_xml_id("-a"));
}

TEST(serialize_document, layout) {
  Document doc = parse_document(wrap(kChar));
  std::string text = serialize_document(doc);
  EXPECT_EQ(text,
            "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n"
            "<!DOCTYPE PARSTORAGE SYSTEM \"XDGDL.dtd\">\n"
            "<PARSTORAGE VERSION=\"1.0\" TIMESTAMP=\"t\">\n"
            "  <TYPE>\n"
            "    <ETYPE TYPE=\"CHAR\" LENGTH=\"1\"/>\n"
            "  </TYPE>\n"
            "  <ISLAND NAME=\"i\">\n"
            "  </ISLAND>\n"
            "</PARSTORAGE>\n");
}

TEST(serialize_document, listings_round_trip) {
  for (const char* name : {"two_server.xml", "three_server.xml", "three_server_corrected.xml"}) {
    Document doc = load_document(name);
    std::string text = serialize_document(doc);
    EXPECT_EQ(parse_document(text), doc) << name;
    EXPECT_EQ(serialize_document(parse_document(text)), text) << name;
  }
}

TEST(serialize_document, wide_characters_survive) {
  Document doc = parse_document(wrap(kChar));
  doc.island.name = "\xE2\x82\xAC <&> \"q\" \xC3\xA9 \xF0\x9F\x98\x80";
  std::string text = serialize_document(doc);
  EXPECT_NE(text.find("&#8364;"), std::string::npos);
  EXPECT_NE(text.find("&#128512;"), std::string::npos);
  EXPECT_EQ(parse_document(text).island.name, doc.island.name);
}

TEST(serialize_document, random_documents_round_trip) {
  rng_t rng(4242);
  for (int i = 0; i < 500; ++i) {
    Document doc = random_document(rng);
    ASSERT_TRUE(validate_document(doc).ok()) << validate_document(doc).to_string();
    std::string text = serialize_document(doc);
    Document back = parse_document(text);
    ASSERT_EQ(back, doc) << text;
    ASSERT_EQ(serialize_document(back), text);
  }
}

TEST(document_helpers, declared_names_and_arrays) {
  Document doc = parse_document(wrap(
      "<TYPE NAME=\"outer\"><TYPE><ARRAY NAME=\"a\"><TYPE><ARRAY NAME=\"b\"><TYPE><ETYPE TYPE=\"C\" "
      "LENGTH=\"1\" NAME=\"e\"/></TYPE><DIMENSION UPPER=\"2\"/></ARRAY></TYPE><DIMENSION "
      "UPPER=\"2\"/></ARRAY></TYPE></TYPE>",
      "<ISLAND NAME=\"i\"></ISLAND>", "<PROCESSORS NAME=\"p\"><PROC_DIMENSION UPPER=\"2\"/></PROCESSORS>"));
  auto names = declared_names(doc);
  EXPECT_EQ(names.types, (std::set<std::string>{"outer", "a", "b", "e"}));
  EXPECT_EQ(names.processors, (std::set<std::string>{"p"}));
  auto arrays = collect_arrays(doc);
  ASSERT_EQ(arrays.size(), 2u);
  EXPECT_EQ(arrays[0]->name, "a");
  EXPECT_EQ(arrays[1]->name, "b");
}

}  // namespace
