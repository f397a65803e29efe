#include "singtrace/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json_text.hpp"
#include "singtrace/error.hpp"
#include "singtrace/numeric.hpp"

namespace singtrace {

namespace {

constexpr std::size_t kDefaultHead = 100;
constexpr int kMaxPieces = 700;

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse " + what + " from '" + text + "'");
  }
  return v;
}

int parse_count(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || v < 1 || v > kMaxPieces) {
    throw Error(ErrorCode::kInvalidArgument,
                what + " must be an integer in [1, " + std::to_string(kMaxPieces) + "]");
  }
  return static_cast<int>(v);
}

std::string json_meta(const Json& j) { return j.dump(); }

// z^{1/p} pieces: (0, 1] at 1, then (2^{(n-1)²}, 2^{n²}] at (n/2^{n²})^{1/p}
StepFunction counterexample_step(double inv_p, int n_max) {
  std::vector<double> log_bp;
  std::vector<double> values;
  log_bp.push_back(0.0);
  values.push_back(1.0);
  for (int n = 1; n <= n_max; ++n) {
    const double nn = static_cast<double>(n) * n;
    log_bp.push_back(nn * kLn2);
    values.push_back(inv_p == 1.0 && n <= 32
                         ? std::ldexp(static_cast<double>(n), -n * n)
                         : std::exp(inv_p * (std::log(static_cast<double>(n)) - nn * kLn2)));
  }
  return StepFunction(std::move(log_bp), std::move(values));
}

StepFunction reciprocal_step() {
  // piece averages of 1/(1+t) on a geometric grid, u = -10 .. 40
  const double step = std::log(10.0) / 16.0;
  std::vector<double> log_bp;
  std::vector<double> values;
  double prev_u = -kInf;
  for (double u = -10.0; u <= 40.0 + 1e-9; u += step) {
    const double lo = prev_u == -kInf ? 0.0 : std::exp(prev_u);
    const double hi = std::exp(u);
    values.push_back((std::log1p(hi) - std::log1p(lo)) / (hi - lo));
    log_bp.push_back(u);
    prev_u = u;
  }
  return StepFunction(std::move(log_bp), std::move(values));
}

Json tail_json(const Spectrum& s) {
  if (const auto* p = std::get_if<PowerTail>(&s.tail())) {
    Json t;
    t["coefficient"] = number(p->coefficient);
    t["exponent"] = number(p->exponent);
    t["start_index"] = s.tail_start();
    return t;
  }
  if (const auto* o = std::get_if<LogLogOscillatingTail>(&s.tail())) {
    Json t;
    t["kind"] = "loglog_oscillating";
    t["level"] = number(o->level);
    t["amplitude"] = number(o->amplitude);
    t["offset"] = number(o->offset);
    t["start_index"] = s.tail_start();
    return t;
  }
  return nullptr;
}

Json parse_stream(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> number_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::kSchema, std::string("missing array '") + key + "'");
  }
  std::vector<double> out;
  std::size_t i = 0;
  for (const auto& v : j.at(key)) {
    ++i;
    if (!v.is_number()) {
      throw Error(ErrorCode::kSchema, std::string("'") + key + "' entries must be numbers", i);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

double field(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kSchema, std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw Error(ErrorCode::kSchema, std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string metadata_of(const Json& j) {
  if (!j.contains("metadata") || j.at("metadata").is_null()) return "{}";
  if (!j.at("metadata").is_object()) throw Error(ErrorCode::kSchema, "'metadata' must be an object");
  return j.at("metadata").dump();
}

SpectrumFile spectrum_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "spectrum file must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "mu" && key != "tail" && key != "metadata") {
      throw Error(ErrorCode::kSchema, "unknown key '" + key + "'");
    }
  }
  SpectrumFile f;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw Error(ErrorCode::kSchema, "'name' must be a string");
    f.name = j.at("name").get<std::string>();
  }
  std::vector<double> mu = number_list(j, "mu");
  SpectrumTail tail;
  if (j.contains("tail") && !j.at("tail").is_null()) {
    const Json& t = j.at("tail");
    if (!t.is_object()) throw Error(ErrorCode::kSchema, "'tail' must be an object or null");
    const double start = field(t, "start_index");
    if (start != static_cast<double>(mu.size() + 1)) {
      throw Error(ErrorCode::kSchema, "tail start_index must be " + std::to_string(mu.size() + 1) +
                                          " (one past the head)");
    }
    const std::string kind = t.contains("kind") ? t.at("kind").get<std::string>() : "power";
    if (kind == "power") {
      tail = PowerTail{field(t, "coefficient"), field(t, "exponent")};
    } else if (kind == "loglog_oscillating") {
      tail = LogLogOscillatingTail{field(t, "level"), field(t, "amplitude"), field(t, "offset")};
    } else {
      throw Error(ErrorCode::kSchema, "unknown tail kind '" + kind + "'");
    }
  }
  f.spectrum = Spectrum(std::move(mu), tail, f.name);
  f.metadata_json = metadata_of(j);
  return f;
}

StepFile step_from_json(const Json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key != "name" && key != "log_breakpoints" && key != "values" && key != "beyond_last" &&
        key != "metadata") {
      throw Error(ErrorCode::kSchema, "unknown key '" + key + "'");
    }
  }
  StepFile f;
  if (j.contains("name")) f.name = j.at("name").get<std::string>();
  const double beyond = j.contains("beyond_last") ? field(j, "beyond_last") : 0.0;
  f.step = StepFunction(number_list(j, "log_breakpoints"), number_list(j, "values"), beyond);
  f.metadata_json = metadata_of(j);
  return f;
}

Json meta_object(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::kSchema, "metadata is not valid JSON");
  }
}

}  // namespace

std::size_t gen_param_count(const std::string& kind) {
  if (kind == "harmonic" || kind == "oscillating" || kind == "small_ideal") return 0;
  if (kind == "power" || kind == "counterexample_z" || kind == "finite") return 1;
  if (kind == "counterexample_x") return 2;
  throw Error(ErrorCode::kInvalidArgument, "unknown corpus kind '" + kind + "'");
}

CorpusMember gen_spectrum(const std::string& kind, const std::vector<std::string>& params,
                          const GenOptions& options) {
  const std::size_t want = gen_param_count(kind);
  if (params.size() != want) {
    throw Error(ErrorCode::kInvalidArgument, kind + " takes " + std::to_string(want) + " parameter(s), got " +
                                                 std::to_string(params.size()));
  }
  const std::size_t head = options.head > 0 ? options.head : kDefaultHead;
  Json meta;
  meta["generator"] = kind;
  if (kind == "power" || kind == "harmonic") {
    const double p = kind == "harmonic" ? 1.0 : parse_double(params[0], "p");
    if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::kInvalidArgument, "power: p must be > 0");
    std::vector<double> mu(head);
    for (std::size_t n = 1; n <= head; ++n) mu[n - 1] = std::pow(static_cast<double>(n), -1.0 / p);
    char buf[64];
    std::snprintf(buf, sizeof buf, "power:%g", p);
    const std::string name = kind == "harmonic" ? "harmonic" : buf;
    meta["p"] = number(p);
    Spectrum s(std::move(mu), PowerTail{1.0, 1.0 / p}, name);
    return {name, s, Profile(s), json_meta(meta)};
  }
  if (kind == "oscillating") {
    // μ_n = (2 + sin ln ln m)/m with m = n + 2
    std::vector<double> mu(head);
    for (std::size_t n = 1; n <= head; ++n) {
      const double m = static_cast<double>(n) + 2.0;
      mu[n - 1] = (2.0 + std::sin(std::log(std::log(m)))) / m;
    }
    meta["index_offset"] = 2;
    Spectrum s(std::move(mu), LogLogOscillatingTail{2.0, 1.0, 2.0}, "oscillating");
    return {"oscillating", s, Profile(s), json_meta(meta)};
  }
  if (kind == "small_ideal") {
    meta["materialized"] = "piece averages of 1/(1+t), 16 pieces per decade";
    return {"small_ideal", reciprocal_step(), Profile::reciprocal(), json_meta(meta)};
  }
  if (kind == "counterexample_z" || kind == "counterexample_x") {
    const bool is_x = kind == "counterexample_x";
    const double p = is_x ? parse_double(params[0], "p") : 1.0;
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::kInvalidArgument, "counterexample_x: p must be >= 1");
    const int n_max = parse_count(params[is_x ? 1 : 0], "n_max");
    char buf[96];
    if (is_x) {
      std::snprintf(buf, sizeof buf, "counterexample_x:%g:%d", p, n_max);
    } else {
      std::snprintf(buf, sizeof buf, "counterexample_z:%d", n_max);
    }
    meta["p"] = number(p);
    meta["n_max"] = n_max;
    return {buf, counterexample_step(1.0 / p, n_max),
            Profile::counterexample(1.0 / p, n_max).renamed(buf), json_meta(meta)};
  }
  // finite
  std::vector<double> mu;
  std::stringstream ss(params[0]);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    mu.push_back(parse_double(item, "singular value"));
  }
  if (mu.empty()) throw Error(ErrorCode::kInvalidArgument, "finite: empty list");
  if (options.sort) std::sort(mu.begin(), mu.end(), std::greater<>());
  Spectrum s(std::move(mu), {}, "finite");
  return {"finite", s, Profile(s), json_meta(meta)};
}

CorpusMember gen_from_descriptor(const std::string& descriptor, const GenOptions& options) {
  if (descriptor.rfind("gen:", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "generator descriptors start with 'gen:'");
  }
  std::vector<std::string> parts;
  std::stringstream ss(descriptor.substr(4));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw Error(ErrorCode::kInvalidArgument, "empty generator descriptor");
  const std::string kind = parts.front();
  parts.erase(parts.begin());
  return gen_spectrum(kind, parts, options);
}

SpectrumFile read_spectrum_json(std::istream& in) { return spectrum_from_json(parse_stream(in)); }

void write_spectrum_json(std::ostream& out, const SpectrumFile& file) {
  Json j;
  j["name"] = file.name.empty() ? file.spectrum.name() : file.name;
  Json mu = Json::array();
  for (double v : file.spectrum.head()) mu.push_back(number(v));
  j["mu"] = std::move(mu);
  j["tail"] = tail_json(file.spectrum);
  j["metadata"] = meta_object(file.metadata_json);
  out << dump_json(j);
}

SpectrumFile read_spectrum_csv(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t row = 0;
  std::vector<double> mu;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "mu") throw Error(ErrorCode::kSchema, "CSV header must be 'mu'");
      header = true;
      continue;
    }
    ++row;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != line.size()) throw Error(ErrorCode::kSchema, "CSV: not a number", row);
    mu.push_back(v);
  }
  if (!header) throw Error(ErrorCode::kSchema, "CSV: missing header 'mu'");
  SpectrumFile f;
  f.name = name;
  f.spectrum = Spectrum(std::move(mu), {}, name);
  return f;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  if (spectrum.has_tail()) throw Error(ErrorCode::kSchema, "CSV cannot express a tail; use JSON");
  out << "mu\n";
  char buf[32];
  for (double v : spectrum.head()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

StepFile read_step_json(std::istream& in) { return step_from_json(parse_stream(in)); }

void write_step_json(std::ostream& out, const StepFile& file) {
  Json j;
  if (!file.name.empty()) j["name"] = file.name;
  Json bp = Json::array();
  for (double v : file.step.log_breakpoints()) bp.push_back(number(v));
  Json values = Json::array();
  for (double v : file.step.values()) values.push_back(number(v));
  j["log_breakpoints"] = std::move(bp);
  j["values"] = std::move(values);
  j["beyond_last"] = number(file.step.beyond_last());
  j["metadata"] = meta_object(file.metadata_json);
  out << dump_json(j);
}

Spectrum load_spectrum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_spectrum_json(in).spectrum;
}

void save_spectrum(const Spectrum& spectrum, const std::string& path, const std::string& metadata_json) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  write_spectrum_json(out, {spectrum.name(), spectrum, metadata_json});
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

CorpusMember read_member(std::istream& in, const std::string& fallback_name) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorCode::kSchema, "empty input");
  if (text[first] != '{') {
    std::istringstream csv(text);
    SpectrumFile f = read_spectrum_csv(csv, fallback_name);
    return {f.name, f.spectrum, Profile(f.spectrum), "{}"};
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kSchema, "input must be a JSON object");
  if (j.contains("log_breakpoints")) {
    StepFile f = step_from_json(j);
    const std::string name = f.name.empty() ? fallback_name : f.name;
    return {name, f.step, Profile(f.step).renamed(name), f.metadata_json};
  }
  SpectrumFile f = spectrum_from_json(j);
  const std::string name = f.name.empty() ? fallback_name : f.name;
  return {name, f.spectrum, Profile(f.spectrum).renamed(name), f.metadata_json};
}

CorpusMember load_input(const std::string& descriptor, std::istream& stdin_stream,
                        const GenOptions& options) {
  if (descriptor.rfind("gen:", 0) == 0) return gen_from_descriptor(descriptor, options);
  if (descriptor == "-") return read_member(stdin_stream, "stdin");
  std::ifstream in(descriptor);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + descriptor + "'");
  return read_member(in, descriptor);
}

void write_member(std::ostream& out, const CorpusMember& member, bool csv) {
  if (const auto* s = std::get_if<Spectrum>(&member.data)) {
    if (csv) {
      write_spectrum_csv(out, *s);
    } else {
      write_spectrum_json(out, {member.name, *s, member.metadata_json});
    }
    return;
  }
  if (csv) throw Error(ErrorCode::kSchema, "step functions have no CSV form; use JSON");
  write_step_json(out, {member.name, std::get<StepFunction>(member.data), member.metadata_json});
}

}  // namespace singtrace
