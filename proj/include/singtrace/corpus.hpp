#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "singtrace/profile.hpp"
#include "singtrace/spectrum.hpp"
#include "singtrace/step_function.hpp"

namespace singtrace {

using SpectrumData = std::variant<Spectrum, StepFunction>;

/// A generated or loaded input: the raw data as it would be written to a
/// file, and the profile used for analysis. For the analytic members
/// (small_ideal, counterexamples) the profile is the exact model while the
/// data is its step-function materialization.
struct CorpusMember {
  std::string name;
  SpectrumData data;
  Profile profile;
  std::string metadata_json = "{}";
};

struct GenOptions {
  std::size_t head = 0;  // 0: kind default
  bool sort = false;     // finite lists only
};

/// Kinds: power <p>, harmonic, oscillating, small_ideal, counterexample_z
/// <n_max>, counterexample_x <p> <n_max>, finite <comma list>.
CorpusMember gen_spectrum(const std::string& kind, const std::vector<std::string>& params,
                          const GenOptions& options = {});
/// Number of positional parameters a kind takes.
std::size_t gen_param_count(const std::string& kind);
/// "gen:kind:param:param" form.
CorpusMember gen_from_descriptor(const std::string& descriptor, const GenOptions& options = {});

struct SpectrumFile {
  std::string name;
  Spectrum spectrum;
  std::string metadata_json = "{}";
};

struct StepFile {
  std::string name;
  StepFunction step;
  std::string metadata_json = "{}";
};

SpectrumFile read_spectrum_json(std::istream& in);
void write_spectrum_json(std::ostream& out, const SpectrumFile& file);
/// One value per line after the header row "mu"; no tail.
SpectrumFile read_spectrum_csv(std::istream& in, const std::string& name = "csv");
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
StepFile read_step_json(std::istream& in);
void write_step_json(std::ostream& out, const StepFile& file);

Spectrum load_spectrum(const std::string& path);
void save_spectrum(const Spectrum& spectrum, const std::string& path,
                   const std::string& metadata_json = "{}");

/// Reads any supported input from a stream, choosing the format by content.
CorpusMember read_member(std::istream& in, const std::string& fallback_name);
/// "gen:..." descriptor, "-" for `stdin`, or a file path.
CorpusMember load_input(const std::string& descriptor, std::istream& stdin_stream,
                        const GenOptions& options = {});
/// Writes the member's data: .csv gives CSV, anything else JSON.
void write_member(std::ostream& out, const CorpusMember& member, bool csv = false);

}  // namespace singtrace
