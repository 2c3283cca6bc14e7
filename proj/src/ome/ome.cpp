#include "omerdf/ome/ome.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <regex>
#include <set>
#include <unordered_set>

#include "omerdf/error.hpp"
#include "omerdf/xml/dom.hpp"

namespace omerdf::ome {

namespace {

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  auto whole = body.substr(0, dot);
  auto frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac)) {
    return std::nullopt;
  }
  while (whole.size() > 1 && whole.front() == '0') whole.remove_prefix(1);
  while (!frac.empty() && frac.back() == '0') frac.remove_suffix(1);
  std::string canon_whole = whole.empty() ? "0" : std::string(whole);
  std::string canon_frac = frac.empty() ? "0" : std::string(frac);
  const bool zero = canon_whole == "0" && canon_frac == "0";

  Decimal d;
  d.lexical = (negative && !zero ? "-" : "") + canon_whole + "." + canon_frac;
  const auto& lex = d.lexical;
  std::from_chars(lex.data(), lex.data() + lex.size(), d.value);
  return d;
}

bool is_timestamp_with_zone(std::string_view s) {
  static const std::regex re(
      R"(^-?(\d{4,})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(\.\d+)?(Z|([+-])(\d{2}):(\d{2}))$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(s.begin(), s.end(), m, re)) return false;
  auto num = [&](int i) { return std::stoi(m[i].str()); };
  const int month = num(2), day = num(3), hour = num(4), minute = num(5), second = num(6);
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  if (hour > 24 || minute > 59 || second > 60) return false;
  if (hour == 24 && (minute != 0 || second != 0)) return false;
  if (m[9].matched) {
    const int zh = num(10), zm = num(11);
    if (zh > 14 || zm > 59 || (zh == 14 && zm != 0)) return false;
  }
  return true;
}

const OmeImage* OmeDocument::find_image(std::string_view id) const {
  for (const auto& i : images) {
    if (i.id == id) return &i;
  }
  return nullptr;
}

const OmeInstrument* OmeDocument::find_instrument(std::string_view id) const {
  for (const auto& i : instruments) {
    if (i.id == id) return &i;
  }
  return nullptr;
}

const OmeExperimenter* OmeDocument::find_experimenter(std::string_view id) const {
  for (const auto& e : experimenters) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

namespace {

using xml::Element;

[[noreturn]] void fail(ErrorCode code, const std::string& msg, const Element& at) {
  throw Error(code, msg, at.line, std::nullopt);
}

std::string required_attr(const Element& e, std::string_view key, const std::string& path) {
  const auto v = e.attribute(key);
  if (!v) fail(ErrorCode::MissingRequiredField, path + "/@" + std::string(key), e);
  return std::string(*v);
}

std::optional<std::string> optional_attr(const Element& e, std::string_view key) {
  const auto v = e.attribute(key);
  if (!v || trim(*v).empty()) return std::nullopt;
  return std::string(*v);
}

std::uint64_t read_size(const Element& pixels, std::string_view key, const std::string& path) {
  const auto text = required_attr(pixels, key, path);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    fail(ErrorCode::InvalidDimension,
         path + "/@" + std::string(key) + ": '" + text + "' is not a positive integer",
         pixels);
  }
  return v;
}

std::optional<Decimal> read_physical(const Element& pixels, std::string_view key,
                                     const std::string& path) {
  const auto text = optional_attr(pixels, key);
  if (!text) return std::nullopt;
  const auto d = Decimal::parse(*text);
  if (!d || d->value <= 0) {
    fail(ErrorCode::InvalidDimension,
         path + "/@" + std::string(key) + ": '" + *text + "' is not a positive decimal",
         pixels);
  }
  return d;
}

OmeImage read_image(const Element& e) {
  OmeImage img;
  img.id = required_attr(e, "ID", "Image");
  const auto path = "Image[" + img.id + "]";
  img.name = required_attr(e, "Name", path);

  if (const auto* date = e.first_child("AcquisitionDate")) {
    const auto text = std::string(trim(date->text));
    if (!is_timestamp_with_zone(text)) {
      fail(ErrorCode::InvalidTimestamp,
           path + "/AcquisitionDate: '" + text + "' is not ISO-8601 with timezone", *date);
    }
    img.acquisition_date = text;
  }
  if (const auto* ref = e.first_child("InstrumentRef")) {
    img.instrument_ref = required_attr(*ref, "ID", path + "/InstrumentRef");
  }
  if (const auto* ref = e.first_child("ExperimenterRef")) {
    img.experimenter_ref = required_attr(*ref, "ID", path + "/ExperimenterRef");
  }

  const auto* pixels = e.first_child("Pixels");
  if (!pixels) fail(ErrorCode::MissingRequiredField, path + "/Pixels", e);
  const auto ppath = path + "/Pixels";
  img.pixels.size_x = read_size(*pixels, "SizeX", ppath);
  img.pixels.size_y = read_size(*pixels, "SizeY", ppath);
  img.pixels.size_z = read_size(*pixels, "SizeZ", ppath);
  img.pixels.size_c = read_size(*pixels, "SizeC", ppath);
  img.pixels.size_t = read_size(*pixels, "SizeT", ppath);
  img.pixels.physical_size_x = read_physical(*pixels, "PhysicalSizeX", ppath);
  img.pixels.physical_size_y = read_physical(*pixels, "PhysicalSizeY", ppath);
  return img;
}

OmeInstrument read_instrument(const Element& e) {
  OmeInstrument ins;
  ins.id = required_attr(e, "ID", "Instrument");
  if (const auto* scope = e.first_child("Microscope")) {
    const auto type = scope->attribute("Type");
    if (type && *type == "Electron") ins.kind = InstrumentKind::ElectronMicroscope;
    ins.model = optional_attr(*scope, "Model");
  }
  return ins;
}

OmeExperimenter read_experimenter(const Element& e) {
  OmeExperimenter ex;
  ex.id = required_attr(e, "ID", "Experimenter");
  const auto first = optional_attr(e, "FirstName");
  const auto last = optional_attr(e, "LastName");
  if (first && last) {
    ex.name = *first + " " + *last;
  } else if (first || last) {
    ex.name = first ? *first : *last;
  } else if (const auto user = optional_attr(e, "UserName")) {
    ex.name = *user;
  } else {
    fail(ErrorCode::MissingRequiredField, "Experimenter[" + ex.id + "]/@LastName", e);
  }
  ex.email = optional_attr(e, "Email");
  return ex;
}

}  // namespace

OmeDocument parse_ome_document(std::string_view text) {
  const Element root = xml::parse_document(text);
  if (root.local_name() != "OME") {
    throw Error(ErrorCode::MalformedXml,
                "root element is '" + root.name + "', expected OME", root.line,
                std::nullopt);
  }
  OmeDocument doc;
  std::unordered_set<std::string> ids;
  auto claim = [&](const std::string& id, const Element& at) {
    if (!ids.insert(id).second) fail(ErrorCode::DuplicateId, "duplicate ID '" + id + "'", at);
  };
  for (const auto& child : root.children) {
    const auto kind = child.local_name();
    if (kind == "Image") {
      doc.images.push_back(read_image(child));
      claim(doc.images.back().id, child);
    } else if (kind == "Instrument") {
      doc.instruments.push_back(read_instrument(child));
      claim(doc.instruments.back().id, child);
    } else if (kind == "Experimenter") {
      doc.experimenters.push_back(read_experimenter(child));
      claim(doc.experimenters.back().id, child);
    }
  }
  for (const auto& img : doc.images) {
    if (img.instrument_ref && !doc.find_instrument(*img.instrument_ref)) {
      throw Error(ErrorCode::DanglingReference,
                  "Image[" + img.id + "] references undeclared instrument '" +
                      *img.instrument_ref + "'");
    }
    if (img.experimenter_ref && !doc.find_experimenter(*img.experimenter_ref)) {
      throw Error(ErrorCode::DanglingReference,
                  "Image[" + img.id + "] references undeclared experimenter '" +
                      *img.experimenter_ref + "'");
    }
  }
  return doc;
}

// --- sidecar ------------------------------------------------------------------

namespace {

constexpr std::size_t kColumns = 9;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

const std::vector<std::string_view>& header_columns() {
  static const auto cols = split(kSidecarHeader, '\t');
  return cols;
}

bool is_curie(std::string_view s) {
  static const std::regex re(R"(^[A-Za-z][A-Za-z0-9_.-]*:[^\s:][^\s]*$)");
  return std::regex_match(s.begin(), s.end(), re);
}

[[noreturn]] void bad_value(std::size_t line, std::string_view column, const std::string& why) {
  throw Error(ErrorCode::BadValue,
              "row " + std::to_string(line) + ", column " + std::string(column) + ": " + why,
              line, std::nullopt);
}

std::optional<std::string> cell(std::string_view v) {
  v = trim(v);
  if (v.empty()) return std::nullopt;
  return std::string(v);
}

std::optional<Decimal> decimal_cell(std::string_view v, std::size_t line,
                                    std::string_view column) {
  const auto text = cell(v);
  if (!text) return std::nullopt;
  auto d = Decimal::parse(*text);
  if (!d) bad_value(line, column, "'" + *text + "' is not a decimal");
  return d;
}

void check_header(std::string_view line) {
  const auto cols = split(line, '\t');
  const auto& expected = header_columns();
  for (const auto c : cols) {
    if (std::find(expected.begin(), expected.end(), c) == expected.end()) {
      throw Error(ErrorCode::UnknownColumn, "unknown sidecar column '" + std::string(c) + "'",
                  1, std::nullopt);
    }
  }
  if (cols != expected) {
    throw Error(ErrorCode::BadHeader,
                "sidecar header must be exactly: " + std::string(kSidecarHeader), 1,
                std::nullopt);
  }
}

}  // namespace

std::vector<EmAnnotation> parse_sidecar(std::string_view text, SidecarOptions opts) {
  std::vector<std::string_view> lines = split(text, '\n');
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  if (lines.empty() || (lines.size() == 1 && lines[0].empty())) {
    throw Error(ErrorCode::BadHeader, "sidecar is empty; header line required");
  }
  check_header(lines[0]);

  const auto& names = header_columns();
  std::vector<EmAnnotation> out;
  std::set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    const auto cells = split(lines[i], '\t');
    if (cells.size() != kColumns) {
      bad_value(line_no, "*", "expected " + std::to_string(kColumns) + " cells, found " +
                                  std::to_string(cells.size()));
    }
    EmAnnotation a;
    const auto image_id = cell(cells[0]);
    if (!image_id) bad_value(line_no, names[0], "image_id is required");
    a.image_id = *image_id;
    const auto sample_id = cell(cells[1]);
    if (!sample_id) bad_value(line_no, names[1], "sample_id is required");
    a.sample_id = *sample_id;
    a.container_id = cell(cells[2]);
    a.strain_id = cell(cells[3]);
    if (a.strain_id && !is_curie(*a.strain_id)) {
      bad_value(line_no, names[3], "'" + *a.strain_id + "' is not a prefix:localId CURIE");
    }
    a.staining_method = cell(cells[4]);
    a.acceleration_voltage_kv = decimal_cell(cells[5], line_no, names[5]);
    a.electron_gun_type = cell(cells[6]);
    a.electron_wavelength_pm = decimal_cell(cells[7], line_no, names[7]);
    for (const auto p : split(cells[8], ';')) {
      if (auto obs = cell(p)) a.phenotype_observations.push_back(std::move(*obs));
    }
    if (opts.strict) {
      const auto& kv = a.acceleration_voltage_kv;
      if (kv && !(kv->value > 0 && kv->value <= 1000)) {
        bad_value(line_no, names[5], kv->lexical + " kV is outside (0, 1000]");
      }
      const auto& pm = a.electron_wavelength_pm;
      if (pm && !(pm->value > 0)) bad_value(line_no, names[7], "wavelength must be > 0");
    }
    if (!seen.insert(a.image_id).second) {
      throw Error(ErrorCode::DuplicateImageId,
                  "image_id '" + a.image_id + "' appears in more than one row", line_no,
                  std::nullopt);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_sidecar(const std::vector<EmAnnotation>& records) {
  std::string out(kSidecarHeader);
  out += '\n';
  auto put = [&](std::string_view v, bool last = false) {
    if (v.find_first_of("\t\r\n") != std::string_view::npos) {
      throw Error(ErrorCode::BadValue, "sidecar cell contains a tab or newline");
    }
    out += v;
    out += last ? '\n' : '\t';
  };
  auto opt = [&](const std::optional<std::string>& v) { put(v ? *v : ""); };
  auto dec = [&](const std::optional<Decimal>& v) { put(v ? v->lexical : ""); };
  for (const auto& r : records) {
    put(r.image_id);
    put(r.sample_id);
    opt(r.container_id);
    opt(r.strain_id);
    opt(r.staining_method);
    dec(r.acceleration_voltage_kv);
    opt(r.electron_gun_type);
    dec(r.electron_wavelength_pm);
    std::string phenos;
    for (std::size_t i = 0; i < r.phenotype_observations.size(); ++i) {
      const auto& p = r.phenotype_observations[i];
      if (p.find(';') != std::string::npos) {
        throw Error(ErrorCode::BadValue, "phenotype '" + p + "' contains ';'");
      }
      if (i) phenos += ';';
      phenos += p;
    }
    put(phenos, true);
  }
  return out;
}

std::vector<ImageRecord> join_annotations(const OmeDocument& doc,
                                          const std::vector<EmAnnotation>& anns) {
  std::map<std::string, const EmAnnotation*> by_image;
  for (const auto& a : anns) {
    if (!doc.find_image(a.image_id)) {
      throw Error(ErrorCode::OrphanAnnotation,
                  "annotation for unknown image '" + a.image_id + "'");
    }
    if (!by_image.emplace(a.image_id, &a).second) {
      throw Error(ErrorCode::DuplicateImageId,
                  "two annotations for image '" + a.image_id + "'");
    }
  }
  std::vector<ImageRecord> out;
  out.reserve(doc.images.size());
  for (const auto& img : doc.images) {
    const auto it = by_image.find(img.id);
    out.push_back({img, it == by_image.end() ? std::nullopt
                                             : std::optional<EmAnnotation>(*it->second)});
  }
  return out;
}

}  // namespace omerdf::ome
