#pragma once

#include <string>
#include <vector>

#include "friable/bounds.hpp"
#include "friable/reference.hpp"
#include "friable/saddle.hpp"

namespace friable {

enum class Kind { bound_lo, bound_hi, estimate, exact };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& s);

// One numeric field. When log10 is set, value is the base-10 logarithm of
// the magnitude it stands for.
struct Field {
  std::string name;
  double value = 0.0;
  Kind kind = Kind::exact;
  bool log10 = false;

  friend bool operator==(const Field&, const Field&) = default;
};

struct Section {
  std::string name;
  std::vector<Field> fields;

  friend bool operator==(const Section&, const Section&) = default;
};

// Versioned result record shared by the JSON and table outputs.
struct Report {
  static constexpr const char* kSchemaVersion = "1.0";
  static constexpr const char* kSectionNames[] = {"input",    "params",  "saddle",    "breakpoints",
                                                  "integrals", "bounds", "references"};

  std::string command;
  std::string mode;
  std::vector<std::string> notes;
  std::vector<Section> sections;  // always the seven names above, in order

  Report();
  Section& section(const std::string& name);
  const Section& section(const std::string& name) const;
  void add(const std::string& section_name, const std::string& field, double value, Kind kind, bool log10 = false);
  // First field with this name in the section, or nullptr.
  const Field* find(const std::string& section_name, const std::string& field) const;

  std::string to_json(int indent = 2) const;
  static Report from_json(const std::string& text);
  std::string render_table() const;

  friend bool operator==(const Report&, const Report&) = default;
};

void add_input(Report& r, const SmoothParams& p);
void add_saddle(Report& r, const SaddleData& s);
void add_run_params(Report& r, const RunParams& run);
void add_bounds(Report& r, const PsiBounds& b);
// Reference estimates; GS is skipped (with a note) when alpha is outside its range.
void add_references(Report& r, const SmoothParams& p, const SaddleData& s, const PrimeTable& table,
                    const RhoTable& rho);

}  // namespace friable
