#include "levylab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace levylab {

const char* const kKnownChecks[10] = {"simulate-levy", "integrate", "ibp-check",  "solve",
                                      "davie-check",   "flow-check", "holder-check",
                                      "lp-estimate",   "tail-check", "kinetic-demo"};

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

Matrix parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) fail(what + " must be a 2d array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) fail(what + " has ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Vector parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) fail(what + " must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

JumpDist parse_jumps(const json& j) {
  std::string family = j.at("family").get<std::string>();
  if (family == "point_mass") return PointMassJump{parse_vector(j.at("value"), "jump value")};
  if (family == "gaussian") {
    return GaussianJump{j.at("mean").get<double>(), j.at("sd").get<double>()};
  }
  if (family == "uniform") return UniformJump{j.at("lo").get<double>(), j.at("hi").get<double>()};
  if (family == "pareto") return ParetoJump{j.at("index").get<double>()};
  fail("unknown jump family '" + family + "'");
}

GeneratingTriplet parse_triplet(const json& j, SamplerOptions& sampler) {
  int dim = j.at("dim").get<int>();
  Matrix q = j.contains("Q") ? parse_matrix(j.at("Q"), "Q") : Matrix::Zero(dim, dim);
  LevyMeasure measure;
  if (j.contains("levy_measure")) {
    for (const json& comp : j.at("levy_measure")) {
      std::string type = comp.at("type").get<std::string>();
      if (type == "compound_poisson") {
        measure.components.push_back(
            CompoundPoissonComp{comp.at("intensity").get<double>(), parse_jumps(comp.at("jumps"))});
      } else if (type == "small_jump_stable") {
        measure.components.push_back(
            SmallJumpStableComp{comp.at("alpha").get<double>(), comp.at("scale").get<double>()});
      } else {
        fail("unknown levy_measure type '" + type + "'");
      }
    }
  }
  if (j.contains("small_jump_strategy")) {
    std::string s = j.at("small_jump_strategy").get<std::string>();
    if (s == "truncate") {
      sampler.strategy = SmallJumpStrategy::truncate;
    } else if (s == "gaussian_surrogate") {
      sampler.strategy = SmallJumpStrategy::gaussian_surrogate;
    } else {
      fail("unknown small_jump_strategy '" + s + "'");
    }
  }
  if (j.contains("epsilon")) sampler.epsilon = j.at("epsilon").get<double>();
  try {
    return GeneratingTriplet(dim, std::move(q), std::move(measure));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

HolderField parse_drift(const json& j, int n) {
  std::string family = j.at("family").get<std::string>();
  if (family == "zero") return HolderField::zero(n);
  if (family == "constant") {
    Vector v = parse_vector(j.at("value"), "drift value");
    if (v.size() != n) fail("drift value dimension mismatch");
    return HolderField::constant(std::move(v));
  }
  if (family == "sin") {
    return HolderField::sinusoid(n, j.value("amp", 1.0), j.value("freq", 1.0));
  }
  fail("unknown drift family '" + family + "'");
}

MatrixIntegrand parse_sigma(const json& j, const Matrix& a) {
  std::string type = j.at("type").get<std::string>();
  if (type == "constant") return MatrixIntegrand::constant(parse_matrix(j.at("matrix"), "sigma"));
  if (type == "matexp_factor") {
    return MatrixIntegrand::matexp_factor(a, parse_matrix(j.at("sigma0"), "sigma0"));
  }
  fail("unknown sigma type '" + type + "'");
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.n_paths = j.value("n_paths", 10000);
    cfg.n_steps = j.value("n_steps", 4000);
    cfg.threads = j.value("threads", 1);
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("checks")) {
      for (const auto& c : j.at("checks")) cfg.checks.push_back(c.get<std::string>());
    }
    std::set<std::string> known(std::begin(kKnownChecks), std::end(kKnownChecks));
    for (const std::string& c : cfg.checks) {
      if (!known.count(c)) fail("unknown check '" + c + "'");
    }

    if (j.contains("triplet")) cfg.triplet = parse_triplet(j.at("triplet"), cfg.sampler);

    if (j.contains("problem")) {
      const json& p = j.at("problem");
      double horizon = p.value("T", 1.0);
      cfg.default_horizon = horizon;
      std::string type = p.value("type", "generic");
      if (type == "kinetic") {
        const json& fj = p.at("force");
        KineticForceSpec spec = KineticForceSpec::random(
            fj.value("d", 1), fj.value("gamma", 0.75), fj.value("beta_prime", 0.75),
            fj.value("amplitude", 0.5), fj.value("clip", 1.0),
            fj.value("force_seed", std::uint64_t{7}));
        cfg.force = holder_force_field(spec);
        cfg.problem = make_kinetic_problem(*cfg.force, horizon);
        cfg.kinetic_problem = true;
        cfg.triplet = kinetic_triplet(cfg.force->d());
      } else if (type == "generic") {
        Matrix a = parse_matrix(p.at("A"), "A");
        int n = static_cast<int>(a.rows());
        MatrixIntegrand sigma = parse_sigma(p.at("sigma"), a);
        HolderField drift = parse_drift(p.at("drift"), n);
        cfg.problem =
            SdeProblem{n, sigma.cols(), std::move(a), std::move(sigma), std::move(drift), horizon};
      } else {
        fail("unknown problem type '" + type + "'");
      }
      cfg.has_problem = true;
      try {
        cfg.problem.validate();
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      if (cfg.problem.d != cfg.triplet.dim()) {
        fail("triplet dimension does not match the problem noise dimension");
      }
    }

    if (j.contains("scheme")) {
      const json& s = j.at("scheme");
      std::string method = s.value("method", "euler");
      if (method == "euler") {
        cfg.scheme = Scheme::euler;
      } else if (method == "picard") {
        cfg.scheme = Scheme::picard;
      } else {
        fail("unknown scheme method '" + method + "'");
      }
      cfg.dt = s.value("dt", 1e-3);
      cfg.picard.tol = s.value("picard_tol", 1e-10);
      cfg.picard.max_iters = s.value("picard_max_iters", 10000);
      cfg.picard.damping = s.value("picard_damping", 0.5);
    }

    cfg.check_params = j.value("check_params", nlohmann::json::object());

    // dt must tile the horizon and land on driver grid nodes (4x for the
    // Richardson references)
    double horizon = cfg.horizon();
    double steps_f = horizon / cfg.dt;
    long steps = std::lround(steps_f);
    if (steps < 1 || std::fabs(steps_f - double(steps)) > 1e-9 * steps_f) {
      fail("dt must divide the horizon T");
    }
    if (cfg.n_steps % (4 * steps) != 0) {
      fail("n_steps must be a multiple of 4*(T/dt) so refined references share the grid");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace levylab
