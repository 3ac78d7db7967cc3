#include "threeform/classify.hpp"

namespace threeform {

namespace {

struct GlName {
  GlTag tag;
  const char* name;
};
struct SpName {
  SpTag tag;
  const char* name;
  Signature sig;
};

constexpr GlName kGlNames[] = {{GlTag::O_minus, "O-"}, {GlTag::O_plus, "O+"}, {GlTag::O_0, "O0"},
                               {GlTag::O_1, "O1"},     {GlTag::O_3, "O3"},    {GlTag::O_6, "O6"}};

const SpName kSpNames[] = {
    {SpTag::O_minus_plus, "O-+", {0, 6, 0}}, {SpTag::O_minus_minus, "O--", {0, 2, 4}},
    {SpTag::O_plus, "O+", {0, 3, 3}},        {SpTag::O_0_plus, "O0+", {3, 3, 0}},
    {SpTag::O_0_minus, "O0-", {3, 1, 2}},    {SpTag::O_1_plus, "O1+", {5, 1, 0}},
    {SpTag::O_1_minus, "O1-", {5, 0, 1}},    {SpTag::O_3_prim, "O3", {6, 0, 0}},
    {SpTag::O_6, "O6", {6, 0, 0}},
};

}  // namespace

std::string tag_name(GlTag t) {
  for (const auto& n : kGlNames)
    if (n.tag == t) return n.name;
  throw std::invalid_argument("unknown GL tag");
}

std::string tag_name(SpTag t) {
  for (const auto& n : kSpNames)
    if (n.tag == t) return n.name;
  throw std::invalid_argument("unknown Sp tag");
}

GlTag parse_gl_tag(const std::string& s) {
  for (const auto& n : kGlNames)
    if (s == n.name) return n.tag;
  throw std::invalid_argument("unknown GL orbit tag '" + s + "'");
}

SpTag parse_sp_tag(const std::string& s) {
  for (const auto& n : kSpNames)
    if (s == n.name) return n.tag;
  throw std::invalid_argument("unknown Sp orbit tag '" + s + "'");
}

const std::vector<GlTag>& all_gl_tags() {
  static const std::vector<GlTag> tags = [] {
    std::vector<GlTag> v;
    for (const auto& n : kGlNames) v.push_back(n.tag);
    return v;
  }();
  return tags;
}

const std::vector<SpTag>& all_sp_tags() {
  static const std::vector<SpTag> tags = [] {
    std::vector<SpTag> v;
    for (const auto& n : kSpNames) v.push_back(n.tag);
    return v;
  }();
  return tags;
}

Signature catalog_signature(SpTag t) {
  for (const auto& n : kSpNames)
    if (n.tag == t) return n.sig;
  throw std::invalid_argument("unknown Sp tag");
}

}  // namespace threeform
