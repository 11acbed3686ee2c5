#include "so3obs/scenario.hpp"

#include "so3obs/integrator.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace so3obs {

const char* to_string(ObserverKind k) {
  return k == ObserverKind::Hybrid ? "hybrid" : "complementary";
}

const char* to_string(IntegratorKind k) {
  return k == IntegratorKind::Cg2 ? "cg2" : "naive_rk4";
}

std::size_t Scenario::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / h));
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidScenario, msg); };
  if (!(duration > 0.0) || !std::isfinite(duration)) fail("duration must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) fail("step must be positive");
  if (h > duration) fail("step exceeds duration");
  if (std::abs(static_cast<double>(step_count()) * h - duration) > 1e-9 * duration) {
    fail("duration must be an integer multiple of step");
  }
  if (directions.size() < 3) fail("at least three reference directions are required");
  if (weights.size() != directions.size()) fail("weights and directions differ in length");
  if (noise.sigma_dir < 0.0 || noise.sigma_gyro < 0.0) fail("noise sigmas must be non-negative");
}

// ---------------------------------------------------------------------------
// Scenario text format

namespace {

struct Value {
  bool is_list = false;
  double number = 0.0;
  std::string word;
  std::vector<Value> items;
};

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string key) : s_(text), key_(std::move(key)) {}

  Value parse() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidScenario, "key '" + key_ + "': " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    if (s_[pos_] == '[') {
      ++pos_;
      Value list;
      list.is_list = true;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return list;
      }
      while (true) {
        list.items.push_back(parse_value());
        skip_ws();
        if (pos_ >= s_.size()) fail("unterminated list");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return list;
        }
        fail("expected ',' or ']'");
      }
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    Value v;
    v.word = std::string(s_.substr(start, pos_ - start));
    const char* first = v.word.data();
    const char* last = first + v.word.size();
    auto [ptr, ec] = std::from_chars(first, last, v.number);
    if (ec != std::errc() || ptr != last) v.number = std::nan("");
    return v;
  }

  std::string_view s_;
  std::string key_;
  std::size_t pos_ = 0;
};

double as_number(const Value& v, const std::string& key) {
  if (v.is_list || std::isnan(v.number)) {
    throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected a number");
  }
  return v.number;
}

Vec3 as_vec3(const Value& v, const std::string& key) {
  if (!v.is_list || v.items.size() != 3) {
    throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected [x, y, z]");
  }
  return Vec3(as_number(v.items[0], key), as_number(v.items[1], key), as_number(v.items[2], key));
}

std::vector<Vec3> as_vec3_list(const Value& v, const std::string& key) {
  if (!v.is_list) throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected a list");
  std::vector<Vec3> out;
  for (const auto& item : v.items) out.push_back(as_vec3(item, key));
  return out;
}

std::vector<double> as_number_list(const Value& v, const std::string& key) {
  if (!v.is_list) throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected a list");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(as_number(item, key));
  return out;
}

Mat3 as_mat3(const Value& v, const std::string& key) {
  const auto rows = as_vec3_list(v, key);
  if (rows.size() != 3) {
    throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected three rows");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = rows[static_cast<std::size_t>(r)].transpose();
  return m;
}

std::string as_word(const Value& v, const std::string& key) {
  if (v.is_list || v.word.empty()) {
    throw Error(ErrorKind::InvalidScenario, "key '" + key + "': expected a word");
  }
  return v.word;
}

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  // Join continuation lines: a value may span lines while brackets are open.
  std::map<std::string, std::string> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string pending_key;
  std::string pending_value;
  int depth = 0;
  int line_no = 0;
  auto flush = [&] {
    if (entries.count(pending_key) != 0) {
      throw Error(ErrorKind::InvalidScenario, "duplicate key '" + pending_key + "'");
    }
    entries[pending_key] = trim(pending_value);
    pending_key.clear();
    pending_value.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (depth == 0) {
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::InvalidScenario,
                    "line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      pending_key = trim(std::string_view(t).substr(0, eq));
      pending_value = t.substr(eq + 1);
    } else {
      pending_value += " " + line;
    }
    depth = 0;
    for (char c : pending_value) depth += c == '[' ? 1 : (c == ']' ? -1 : 0);
    if (depth < 0) throw Error(ErrorKind::InvalidScenario, "unbalanced ']' for key '" + pending_key + "'");
    if (depth == 0) flush();
  }
  if (depth != 0) throw Error(ErrorKind::InvalidScenario, "unterminated list for key '" + pending_key + "'");

  Scenario scn;
  bool have_dirs = false;
  for (const auto& [key, raw] : entries) {
    const Value v = ValueParser(raw, key).parse();
    if (key == "name") {
      scn.name = as_word(v, key);
    } else if (key == "duration") {
      scn.duration = as_number(v, key);
    } else if (key == "step") {
      scn.h = as_number(v, key);
    } else if (key == "directions") {
      scn.directions = as_vec3_list(v, key);
      have_dirs = true;
    } else if (key == "weights") {
      scn.weights = as_number_list(v, key);
    } else if (key == "eigen_order") {
      const auto w = as_word(v, key);
      if (w == "descending") {
        scn.eigen_order = EigenOrder::Descending;
      } else if (w == "ascending") {
        scn.eigen_order = EigenOrder::Ascending;
      } else {
        throw Error(ErrorKind::InvalidScenario, "eigen_order must be descending or ascending");
      }
    } else if (key == "k_R") {
      scn.gains.k_R = as_number(v, key);
    } else if (key == "k_I") {
      scn.gains.k_I = as_number(v, key);
    } else if (key == "alpha") {
      scn.alpha = as_number(v, key);
    } else if (key == "beta") {
      scn.beta = as_number(v, key);
    } else if (key == "delta") {
      if (!v.is_list && v.word == "default") {
        scn.delta.reset();
      } else {
        scn.delta = as_number(v, key);
      }
    } else if (key == "gamma") {
      scn.gamma = as_vec3(v, key);
    } else if (key == "R_bar0") {
      scn.R_bar0 = as_mat3(v, key);
    } else if (key == "gamma_bar0") {
      scn.gamma_bar0 = as_vec3(v, key);
    } else if (key == "initial_mode") {
      const double m = as_number(v, key);
      if (m != 1.0 && m != 2.0 && m != 3.0) {
        throw Error(ErrorKind::InvalidScenario, "initial_mode must be 1, 2 or 3");
      }
      scn.initial_mode = kModes[static_cast<std::size_t>(m) - 1];
    } else if (key == "noise_dir") {
      scn.noise.sigma_dir = as_number(v, key);
    } else if (key == "noise_gyro") {
      scn.noise.sigma_gyro = as_number(v, key);
    } else if (key == "seed") {
      const double s = as_number(v, key);
      if (s < 0.0 || s != std::floor(s)) {
        throw Error(ErrorKind::InvalidScenario, "seed must be a non-negative integer");
      }
      scn.noise.seed = static_cast<std::uint64_t>(s);
    } else if (key == "observer") {
      const auto w = as_word(v, key);
      if (w == "hybrid") {
        scn.observer = ObserverKind::Hybrid;
      } else if (w == "complementary") {
        scn.observer = ObserverKind::Complementary;
      } else {
        throw Error(ErrorKind::InvalidScenario, "observer must be hybrid or complementary");
      }
    } else if (key == "integrator") {
      const auto w = as_word(v, key);
      if (w == "cg2") {
        scn.integrator = IntegratorKind::Cg2;
      } else if (w == "naive_rk4") {
        scn.integrator = IntegratorKind::NaiveRk4;
      } else {
        throw Error(ErrorKind::InvalidScenario, "integrator must be cg2 or naive_rk4");
      }
    } else {
      throw Error(ErrorKind::InvalidScenario, "unknown key '" + key + "'");
    }
  }
  if (!have_dirs) {
    const bool default_weights = scn.weights.empty();
    for (const auto& d : standard_directions()) {
      scn.directions.push_back(d.direction);
      if (default_weights) scn.weights.push_back(d.weight);
    }
  }
  scn.validate();
  return scn;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario scn = parse_scenario(buf.str());
  if (scn.name == "unnamed") scn.name = path.stem().string();
  return scn;
}

// ---------------------------------------------------------------------------
// Truth and simulation

TruthState truth_state(double t, const Vec3& gamma) {
  const double a = std::sin(0.5 * t);
  const double b = 2.0 * std::sin(t);
  const double c = std::cos(2.0 * t) - 3.0;
  const double a_dot = 0.5 * std::cos(0.5 * t);
  const double b_dot = 2.0 * std::cos(t);
  const double c_dot = -2.0 * std::sin(2.0 * t);

  TruthState s;
  s.t = t;
  s.R = euler321(a, b, c);
  const Rotation undo_c = exp_hat(-c * Vec3::UnitX());
  const Rotation undo_b = exp_hat(-b * Vec3::UnitY());
  s.omega = c_dot * Vec3::UnitX() + b_dot * (undo_c * Vec3::UnitY()) +
            a_dot * (undo_c * (undo_b * Vec3::UnitZ()));
  s.gamma = gamma;
  return s;
}

std::vector<double> RunResult::switch_times() const {
  std::vector<double> out;
  for (const auto& j : jumps) out.push_back(j.t);
  return out;
}

ReferenceModel build_model(const Scenario& scn) {
  std::vector<ReferenceDirection> dirs;
  for (std::size_t i = 0; i < scn.directions.size(); ++i) {
    dirs.push_back(ReferenceDirection::from_raw(scn.directions[i], scn.weights[i]));
  }
  ModelOptions opts;
  opts.order = scn.eigen_order;
  return ReferenceModel::build(std::move(dirs), opts);
}

HybridParams hybrid_params(const Scenario& scn, const ReferenceModel& model) {
  HybridParams p = HybridParams::with_default_delta(model, scn.alpha, scn.beta, scn.gains);
  if (scn.delta) p.delta = *scn.delta;
  p.validate(model);
  return p;
}

std::vector<MeasurementFrame> measurement_stream(const Scenario& scn, const ReferenceModel& model) {
  NoiseSource noise(scn.noise);
  NoiseSource* source = scn.noise.enabled() ? &noise : nullptr;
  const std::size_t n = scn.step_count();
  std::vector<MeasurementFrame> frames;
  frames.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    frames.push_back(synthesize_frame(truth_state(static_cast<double>(k) * scn.h, scn.gamma), model, source));
  }
  return frames;
}

RunResult run(const Scenario& scn) {
  scn.validate();
  const ReferenceModel model = build_model(scn);
  return run(scn, model, measurement_stream(scn, model));
}

RunResult run(const Scenario& scn, const ReferenceModel& model,
              const std::vector<MeasurementFrame>& stream) {
  scn.validate();
  const std::size_t n_steps = scn.step_count();
  if (stream.size() != n_steps + 1) {
    throw Error(ErrorKind::InvalidScenario, "measurement stream length does not match the scenario");
  }
  scn.gains.validate();
  const bool is_hybrid = scn.observer == ObserverKind::Hybrid;

  RunResult result;
  result.observer = scn.observer;
  result.integrator = scn.integrator;

  HybridParams params;
  if (is_hybrid) {
    params = hybrid_params(scn, model);
    result.delta = params.delta;
    result.delta_defaulted = !scn.delta.has_value();
  } else {
    params.gains = scn.gains;
  }

  const Rotation r0 = project_rotation(scn.R_bar0);
  result.projection_residual = (r0.matrix() - scn.R_bar0).norm();

  HybridState state;
  state.R_bar = r0.matrix();
  state.gamma_bar = scn.gamma_bar0;
  state.mode = is_hybrid ? scn.initial_mode : Mode::I;

  result.records.reserve(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * scn.h;
    const MeasurementFrame& frame = stream[k];
    const TruthState truth = truth_state(t, scn.gamma);

    TimeSeriesRecord rec;
    rec.t = t;
    if (is_hybrid) {
      const double v_before = hybrid::lyapunov(state, frame.B, model, params, scn.gamma);
      const auto events = hybrid::resolve_jumps(state, frame.B, model, params);
      if (!events.empty()) {
        rec.jump_flag = true;
        result.jumps.push_back({t, events.front().from, events.back().to, v_before,
                                hybrid::lyapunov(state, frame.B, model, params, scn.gamma)});
      }
      rec.e_h_norm = hybrid::innovation_eH(state.mode, frame.B, state.R_bar, model, params).norm();
      rec.psi = hybrid::psi_mode(state.mode, frame.B, state.R_bar, model, params);
      rec.lyapunov = hybrid::lyapunov(state, frame.B, model, params, scn.gamma);
    } else {
      rec.e_h_norm = complementary::innovation_eR(state.R_bar, frame, model).norm();
      rec.psi = attitude_error(state.R_bar, frame.B, model);
      rec.lyapunov = complementary::lyapunov(state.continuous(), frame.B, model, scn.gains, scn.gamma);
    }
    rec.mode = mode_index(state.mode);
    rec.att_err = spectral_norm(state.R_bar - truth.R.matrix());
    rec.gamma_err = scn.gamma - state.gamma_bar;
    rec.ortho_defect = orthogonality_defect(state.R_bar);
    result.records.push_back(rec);

    if (k == n_steps) {
      result.final_state = state.continuous();
      break;
    }

    ObserverFlow flow;
    if (is_hybrid) {
      const Mode frozen = state.mode;
      flow = [&model, &params, frozen](const ObserverState& s, const MeasurementFrame& f) {
        return hybrid::flow(HybridState{s.R_bar, s.gamma_bar, frozen}, f, model, params);
      };
    } else {
      flow = [&model, &scn](const ObserverState& s, const MeasurementFrame& f) {
        return complementary::flow(s, f, model, scn.gains);
      };
    }
    const StepInput in{scn.h, frame, stream[k + 1]};
    const ObserverState next = scn.integrator == IntegratorKind::Cg2
                                   ? cg2_step(state.continuous(), flow, in)
                                   : naive_rk4_step(state.continuous(), flow, in);
    state.R_bar = next.R_bar;
    state.gamma_bar = next.gamma_bar;
  }
  return result;
}

namespace {

RunPair run_pair(const Scenario& a, const Scenario& b) {
  a.validate();
  const ReferenceModel model = build_model(a);
  const auto stream = measurement_stream(a, model);
  auto first = std::async(std::launch::async, [&] { return run(a, model, stream); });
  RunResult second = run(b, model, stream);
  return {first.get(), std::move(second)};
}

}  // namespace

RunPair compare_observers(const Scenario& scn) {
  Scenario hyb = scn;
  hyb.observer = ObserverKind::Hybrid;
  Scenario comp = scn;
  comp.observer = ObserverKind::Complementary;
  return run_pair(hyb, comp);
}

RunPair compare_integrators(const Scenario& scn) {
  Scenario cg = scn;
  cg.integrator = IntegratorKind::Cg2;
  Scenario rk = scn;
  rk.integrator = IntegratorKind::NaiveRk4;
  return run_pair(cg, rk);
}

}  // namespace so3obs
