#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omerdf::ome {

/// A decimal number kept in canonical xsd:decimal lexical form ("5.0",
/// "0.25", "-3.0") together with its double value.
struct Decimal {
  std::string lexical;
  double value = 0;

  /// Accepts [+-]digits[.digits]; returns nullopt otherwise.
  static std::optional<Decimal> parse(std::string_view text);

  friend bool operator==(const Decimal& a, const Decimal& b) {
    return a.lexical == b.lexical;
  }
};

/// ISO-8601 date-time with a mandatory timezone, e.g.
/// "2015-01-20T10:00:00Z" or "2015-01-20T10:00:00.5+09:00".
bool is_timestamp_with_zone(std::string_view s);

struct OmePixels {
  std::uint64_t size_x = 1;
  std::uint64_t size_y = 1;
  std::uint64_t size_z = 1;
  std::uint64_t size_c = 1;
  std::uint64_t size_t = 1;
  /// Micrometres.
  std::optional<Decimal> physical_size_x;
  std::optional<Decimal> physical_size_y;

  friend bool operator==(const OmePixels&, const OmePixels&) = default;
};

struct OmeImage {
  std::string id;
  std::string name;
  std::optional<std::string> acquisition_date;
  OmePixels pixels;
  std::optional<std::string> instrument_ref;
  std::optional<std::string> experimenter_ref;

  friend bool operator==(const OmeImage&, const OmeImage&) = default;
};

enum class InstrumentKind { OpticalMicroscope, ElectronMicroscope };

struct OmeInstrument {
  std::string id;
  InstrumentKind kind = InstrumentKind::OpticalMicroscope;
  std::optional<std::string> model;

  friend bool operator==(const OmeInstrument&, const OmeInstrument&) = default;
};

struct OmeExperimenter {
  std::string id;
  std::string name;
  std::optional<std::string> email;

  friend bool operator==(const OmeExperimenter&, const OmeExperimenter&) = default;
};

struct OmeDocument {
  std::vector<OmeImage> images;
  std::vector<OmeInstrument> instruments;
  std::vector<OmeExperimenter> experimenters;

  const OmeImage* find_image(std::string_view id) const;
  const OmeInstrument* find_instrument(std::string_view id) const;
  const OmeExperimenter* find_experimenter(std::string_view id) const;

  friend bool operator==(const OmeDocument&, const OmeDocument&) = default;
};

/// Reads Image (with Pixels, AcquisitionDate, InstrumentRef,
/// ExperimenterRef), Instrument (with Microscope) and Experimenter elements
/// under the OME root; other elements are ignored.
/// Throws Error with MalformedXml, MissingRequiredField, InvalidDimension,
/// InvalidTimestamp, DuplicateId or DanglingReference.
OmeDocument parse_ome_document(std::string_view text);

/// One sidecar row.
struct EmAnnotation {
  std::string image_id;
  std::string sample_id;
  std::optional<std::string> container_id;
  /// CURIE prefix:localId; the prefix is checked against the link registry
  /// at mapping time.
  std::optional<std::string> strain_id;
  std::optional<std::string> staining_method;
  std::optional<Decimal> acceleration_voltage_kv;
  std::optional<std::string> electron_gun_type;
  std::optional<Decimal> electron_wavelength_pm;
  std::vector<std::string> phenotype_observations;

  friend bool operator==(const EmAnnotation&, const EmAnnotation&) = default;
};

inline constexpr std::string_view kSidecarHeader =
    "image_id\tsample_id\tcontainer_id\tstrain_id\tstain\tvoltage_kv\tgun_type\t"
    "wavelength_pm\tphenotypes";

struct SidecarOptions {
  /// When set, voltage outside (0, 1000] kV and non-positive wavelengths
  /// are BadValue. Otherwise they are kept for the validator to report.
  bool strict = false;
};

/// Throws Error with UnknownColumn, BadHeader, BadValue (line and column
/// name in the message) or DuplicateImageId.
std::vector<EmAnnotation> parse_sidecar(std::string_view text, SidecarOptions opts = {});

/// Header plus one row per record. Throws Error(BadValue) when a cell would
/// contain a tab or newline, or a phenotype contains ';'.
std::string format_sidecar(const std::vector<EmAnnotation>& records);

struct ImageRecord {
  OmeImage image;
  std::optional<EmAnnotation> annotation;
};

/// One entry per image in document order. Throws Error(OrphanAnnotation)
/// for an annotation naming no image, Error(DuplicateImageId) when two
/// annotations name the same image.
std::vector<ImageRecord> join_annotations(const OmeDocument& doc,
                                          const std::vector<EmAnnotation>& anns);

}  // namespace omerdf::ome
