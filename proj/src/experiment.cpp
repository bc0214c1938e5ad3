#include "alc/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace alc {

namespace {

struct Entry
{
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry, std::less<>>;

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, const std::string& msg)
{
  throw ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg);
}

double parse_double(const Entry& e, std::string_view key)
{
  double v = 0.0;
  std::string_view s = e.value;
  if (!s.empty() && s.front() == '+') {
    s.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    fail(e.line, "'" + std::string{key} + "' expects a number, got '" + e.value + "'");
  }
  return v;
}

std::int64_t parse_int(const Entry& e, std::string_view key)
{
  std::int64_t v = 0;
  const std::string_view s = e.value;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    fail(e.line, "'" + std::string{key} + "' expects an integer, got '" + e.value + "'");
  }
  return v;
}

bool parse_bool(const Entry& e, std::string_view key)
{
  if (e.value == "true") {
    return true;
  }
  if (e.value == "false") {
    return false;
  }
  fail(e.line, "'" + std::string{key} + "' expects true or false");
}

std::vector<std::string_view> split_list(std::string_view s)
{
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) {
      break;
    }
    s.remove_prefix(comma + 1);
  }
  return out;
}

class Reader
{
public:
  explicit Reader(Section& section)
    : section_{section}
  {}

  Entry* find(std::string_view key)
  {
    auto it = section_.find(key);
    if (it == section_.end()) {
      return nullptr;
    }
    it->second.used = true;
    return &it->second;
  }

  void num(std::string_view key, double& out)
  {
    if (auto* e = find(key)) {
      out = parse_double(*e, key);
    }
  }

  void integer(std::string_view key, std::int64_t& out)
  {
    if (auto* e = find(key)) {
      out = parse_int(*e, key);
    }
  }

  void reject_unused(std::string_view where)
  {
    for (const auto& [key, e] : section_) {
      if (!e.used) {
        fail(e.line, "unknown key '" + key + "' in " + std::string{where});
      }
    }
  }

private:
  Section& section_;
};

ChannelSpec read_channel(Section& section)
{
  Reader r{section};
  const Entry* type = r.find("type");
  if (type == nullptr) {
    fail(0, "[channel] section needs a 'type'");
  }
  ChannelSpec spec;
  if (type->value == "bernoulli") {
    BernoulliParams p;
    r.num("p_success", p.p_success);
    spec = p;
  } else if (type->value == "gilbert_elliott") {
    GilbertElliottParams p;
    r.num("p_gb", p.p_gb);
    r.num("p_bg", p.p_bg);
    if (auto* e = r.find("initial_state")) {
      try {
        p.initial_state = parse_ge_initial(e->value);
      } catch (const std::invalid_argument& ex) {
        fail(e->line, ex.what());
      }
    }
    spec = p;
  } else if (type->value == "lora") {
    LoRaParams p;
    r.num("sender_x", p.sender.x);
    r.num("sender_y", p.sender.y);
    r.integer("n_interferers", p.n_interferers);
    r.num("box_min", p.box_min);
    r.num("box_max", p.box_max);
    r.num("pathloss_exponent", p.pathloss_exponent);
    r.num("nakagami_m", p.nakagami_m);
    r.num("tx_power_dBm", p.tx_power_dBm);
    r.num("sensitivity_dBm", p.sensitivity_dBm);
    r.num("capture_threshold_dB", p.capture_threshold_dB);
    r.num("interferer_tx_prob", p.interferer_tx_prob);
    r.num("activity_scale", p.activity_scale);
    r.num("pl_d0_dB", p.pl_d0_dB);
    r.num("d0_m", p.d0_m);
    spec = p;
  } else {
    fail(type->line, "unknown channel type '" + type->value + "'");
  }
  r.reject_unused("[channel]");
  return spec;
}

std::string format_roundtrip(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

} // namespace

std::string format_decimal(double value)
{
  if (!std::isfinite(value)) {
    return format_roundtrip(value);
  }
  char buf[512];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  return std::string(buf, ptr);
}

ExperimentFile parse_experiment(std::string_view text)
{
  Section top;
  Section channel;
  bool saw_channel = false;
  Section* current = &top;

  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line != "[channel]") {
        fail(line_no, "unknown section '" + std::string{line} + "'");
      }
      if (saw_channel) {
        fail(line_no, "duplicate [channel] section");
      }
      saw_channel = true;
      current = &channel;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, "expected 'key = value'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty()) {
      fail(line_no, "missing key");
    }
    if (!current->emplace(key, Entry{value, line_no}).second) {
      fail(line_no, "duplicate key '" + key + "'");
    }
  }
  if (!saw_channel) {
    fail(0, "missing [channel] section");
  }

  ExperimentFile exp;
  RunConfig& cfg = exp.base;
  Reader r{top};

  const Entry* scheme = r.find("scheme");
  if (scheme == nullptr) {
    fail(0, "missing 'scheme'");
  }
  for (auto name : split_list(scheme->value)) {
    try {
      exp.schemes.push_back(parse_scheme(name));
    } catch (const std::invalid_argument& ex) {
      fail(scheme->line, ex.what());
    }
  }
  cfg.scheme = exp.schemes.front();

  if (auto* e = r.find("seed")) {
    const std::int64_t seed = parse_int(*e, "seed");
    if (seed < 0) {
      fail(e->line, "seed must be non-negative");
    }
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  r.integer("b", cfg.time.b);
  r.integer("delta_max", cfg.time.delta_max);
  r.integer("l", cfg.time.l);
  r.num("p_feedback", cfg.p_feedback);
  r.integer("blind_degree", cfg.blind.degree);
  r.integer("min_failures", cfg.stop.min_failures);
  r.integer("max_intervals", cfg.stop.max_intervals);
  if (auto* e = r.find("verify_payloads")) {
    cfg.verify_payloads = parse_bool(*e, "verify_payloads");
  }
  r.integer("replicates", exp.replicates);
  if (auto* e = r.find("output")) {
    exp.output = e->value;
  }
  if (auto* e = r.find("axis")) {
    if (!is_known_axis(e->value)) {
      fail(e->line, "unknown sweep axis '" + e->value + "'");
    }
    exp.axis = e->value;
  }
  if (auto* e = r.find("values")) {
    if (!exp.axis) {
      fail(e->line, "'values' given without 'axis'");
    }
    for (auto item : split_list(e->value)) {
      exp.values.push_back(parse_double(Entry{std::string{item}, e->line}, "values"));
    }
  } else if (exp.axis) {
    fail(0, "'axis' given without 'values'");
  }
  r.reject_unused("top level");

  cfg.channel = read_channel(channel);

  if (exp.replicates < 1) {
    fail(0, "replicates must be at least 1");
  }
  try {
    cfg.validate();
    if (exp.axis) {
      for (double v : exp.values) {
        RunConfig probe = cfg;
        apply_axis(probe, *exp.axis, v);
        probe.validate();
      }
    }
  } catch (const std::invalid_argument& ex) {
    fail(0, ex.what());
  }
  return exp;
}

ExperimentFile load_experiment(const std::filesystem::path& path)
{
  std::ifstream in{path};
  if (!in) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_experiment(buf.str());
  } catch (const ConfigError& ex) {
    throw ConfigError(path.string() + ": " + ex.what());
  }
}

std::string serialize_experiment(const ExperimentFile& exp)
{
  std::ostringstream out;
  const RunConfig& cfg = exp.base;
  out << "scheme = ";
  for (std::size_t i = 0; i < exp.schemes.size(); ++i) {
    out << (i ? ", " : "") << to_string(exp.schemes[i]);
  }
  out << "\nseed = " << cfg.seed << "\nb = " << cfg.time.b << "\ndelta_max = " << cfg.time.delta_max
      << "\nl = " << cfg.time.l << "\np_feedback = " << format_roundtrip(cfg.p_feedback)
      << "\nblind_degree = " << cfg.blind.degree << "\nmin_failures = " << cfg.stop.min_failures
      << "\nmax_intervals = " << cfg.stop.max_intervals
      << "\nverify_payloads = " << (cfg.verify_payloads ? "true" : "false") << "\nreplicates = " << exp.replicates
      << '\n';
  if (!exp.output.empty()) {
    out << "output = " << exp.output << '\n';
  }
  if (exp.axis) {
    out << "axis = " << *exp.axis << "\nvalues = ";
    for (std::size_t i = 0; i < exp.values.size(); ++i) {
      out << (i ? ", " : "") << format_roundtrip(exp.values[i]);
    }
    out << '\n';
  }

  out << "\n[channel]\ntype = " << channel_name(cfg.channel) << '\n';
  std::visit(
    [&out](const auto& ch) {
      using C = std::decay_t<decltype(ch)>;
      auto kv = [&out](const char* key, double v) { out << key << " = " << format_roundtrip(v) << '\n'; };
      if constexpr (std::is_same_v<C, BernoulliParams>) {
        kv("p_success", ch.p_success);
      } else if constexpr (std::is_same_v<C, GilbertElliottParams>) {
        kv("p_gb", ch.p_gb);
        kv("p_bg", ch.p_bg);
        out << "initial_state = " << to_string(ch.initial_state) << '\n';
      } else {
        kv("sender_x", ch.sender.x);
        kv("sender_y", ch.sender.y);
        out << "n_interferers = " << ch.n_interferers << '\n';
        kv("box_min", ch.box_min);
        kv("box_max", ch.box_max);
        kv("pathloss_exponent", ch.pathloss_exponent);
        kv("nakagami_m", ch.nakagami_m);
        kv("tx_power_dBm", ch.tx_power_dBm);
        kv("sensitivity_dBm", ch.sensitivity_dBm);
        kv("capture_threshold_dB", ch.capture_threshold_dB);
        kv("interferer_tx_prob", ch.interferer_tx_prob);
        kv("activity_scale", ch.activity_scale);
        kv("pl_d0_dB", ch.pl_d0_dB);
        kv("d0_m", ch.d0_m);
      }
    },
    cfg.channel);
  return out.str();
}

std::vector<RunMetrics> run_experiment(const ExperimentFile& exp, bool as_sweep, unsigned threads)
{
  if (as_sweep && !exp.axis) {
    throw std::invalid_argument("sweep needs 'axis' and 'values' in the experiment file");
  }
  std::vector<RunMetrics> all;
  for (SchemeKind scheme : exp.schemes) {
    RunConfig cfg = exp.base;
    cfg.scheme = scheme;
    auto part = as_sweep ? sweep(cfg, *exp.axis, exp.values, exp.replicates, threads)
                         : replicate_runs(cfg, exp.replicates, threads);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

void write_csv(std::ostream& out, std::span<const RunMetrics> results)
{
  out << csv_header << '\n';
  for (const auto& m : results) {
    out << m.scheme << ',' << m.channel << ',' << (m.axis_value ? format_decimal(*m.axis_value) : "") << ','
        << m.replicate << ',' << m.seed << ',' << m.b << ',' << m.delta_max << ',' << format_decimal(m.p_feedback)
        << ',' << m.generated << ',' << m.failures << ',' << format_decimal(m.dfr) << ',' << m.packets_sent << ','
        << m.symbols_combined_total << ',' << m.xor_ops_total << ',' << format_decimal(m.avg_xors_per_packet) << ','
        << m.intervals_run << '\n';
  }
}

void emit_results(std::span<const RunMetrics> results, const std::filesystem::path& path)
{
  if (results.empty()) {
    throw std::invalid_argument("no results to write");
  }
  std::ofstream out{path, std::ios::binary | std::ios::trunc};
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  write_csv(out, results);
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

} // namespace alc
