#include "kineticflock/io/config.hpp"

#include <fstream>
#include <set>

#include "kineticflock/error.hpp"

namespace kflock::io {

namespace {

template <class Enum>
Enum parse_enum(const std::string& value, const std::initializer_list<std::pair<const char*, Enum>>& table,
                const std::string& path) {
  std::string options;
  for (const auto& [name, e] : table) {
    if (value == name) return e;
    options += options.empty() ? name : std::string(", ") + name;
  }
  fail(ErrorKind::Config, path + ": unknown value '" + value + "' (expected one of " + options + ")");
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(ErrorKind::Config, path + ": expected an object");
}

Json cosine_terms_json(const std::vector<kinetic::CosineTerm>& terms) {
  Json out = Json::array();
  for (const auto& t : terms) out.push_back({{"m", t.m}, {"amplitude", t.amplitude}, {"phase", t.phase}});
  return out;
}

std::vector<kinetic::CosineTerm> parse_cosine_terms(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorKind::Config, path + ": expected an array");
  std::vector<kinetic::CosineTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    require_object(j[i], p);
    ObjectReader r(j[i], p);
    kinetic::CosineTerm t;
    r.get("m", t.m);
    r.get("amplitude", t.amplitude);
    r.get("phase", t.phase);
    r.finish();
    out.push_back(t);
  }
  return out;
}

constexpr std::initializer_list<std::pair<const char*, kinetic::InitialKind>> kInitialKinds = {
    {"zero", kinetic::InitialKind::Zero},
    {"modes", kinetic::InitialKind::Modes},
    {"shifted_maxwellian", kinetic::InitialKind::ShiftedMaxwellian},
    {"random", kinetic::InitialKind::Random},
    {"eigenmode", kinetic::InitialKind::Eigenmode},
};
constexpr std::initializer_list<std::pair<const char*, kinetic::AlignmentMode>> kModes = {
    {"local", kinetic::AlignmentMode::Local},
    {"nonlocal", kinetic::AlignmentMode::Nonlocal},
};
constexpr std::initializer_list<std::pair<const char*, kinetic::TimeScheme>> kSchemes = {
    {"imex_euler", kinetic::TimeScheme::ImexEuler},
    {"ars222", kinetic::TimeScheme::Ars222},
};
constexpr std::initializer_list<std::pair<const char*, particles::ModelKind>> kModels = {
    {"cucker_smale", particles::ModelKind::CuckerSmale},
    {"motsch_tadmor", particles::ModelKind::MotschTadmor},
};

template <class Enum>
std::string enum_name(Enum value, const std::initializer_list<std::pair<const char*, Enum>>& table) {
  for (const auto& [name, e] : table) {
    if (e == value) return name;
  }
  return "unknown";
}

}  // namespace

ObjectReader::ObjectReader(const Json& object, std::string path) : object_(object), path_(std::move(path)) {
  require_object(object_, path_);
}

const Json* ObjectReader::child(const char* key) {
  seen_[key] = true;
  if (!object_.contains(key)) return nullptr;
  return &object_.at(key);
}

void ObjectReader::finish() const {
  for (auto it = object_.begin(); it != object_.end(); ++it) {
    if (!seen_.count(it.key())) fail(ErrorKind::Config, path_ + ": unknown key '" + it.key() + "'");
  }
}

std::string to_string(kinetic::InitialKind kind) { return enum_name(kind, kInitialKinds); }
std::string to_string(kinetic::AlignmentMode mode) { return enum_name(mode, kModes); }
std::string to_string(kinetic::TimeScheme scheme) { return enum_name(scheme, kSchemes); }
std::string to_string(particles::ModelKind kind) { return enum_name(kind, kModels); }

Json to_json(const kinetic::InitialDataSpec& s) {
  Json modes = Json::array();
  for (const auto& m : s.modes) modes.push_back({{"k", m.k}, {"n", m.n}, {"re", m.re}, {"im", m.im}});
  return Json{{"kind", to_string(s.kind)},
              {"modes", modes},
              {"density", cosine_terms_json(s.density)},
              {"velocity", cosine_terms_json(s.velocity)},
              {"amplitude", s.amplitude},
              {"k_max", s.k_max},
              {"n_max", s.n_max},
              {"zero_mean_macro", s.zero_mean_macro},
              {"eigen_k", s.eigen_k}};
}

void from_json(const Json& j, kinetic::InitialDataSpec& s, const std::string& path) {
  ObjectReader r(j, path);
  std::string kind = to_string(s.kind);
  r.get("kind", kind);
  s.kind = parse_enum(kind, kInitialKinds, r.path("kind"));
  if (const Json* modes = r.child("modes")) {
    if (!modes->is_array()) fail(ErrorKind::Config, r.path("modes") + ": expected an array");
    s.modes.clear();
    for (std::size_t i = 0; i < modes->size(); ++i) {
      const std::string p = r.path("modes") + "[" + std::to_string(i) + "]";
      ObjectReader mr((*modes)[i], p);
      kinetic::ModeEntry m;
      mr.get("k", m.k);
      mr.get("n", m.n);
      mr.get("re", m.re);
      mr.get("im", m.im);
      mr.finish();
      s.modes.push_back(m);
    }
  }
  if (const Json* d = r.child("density")) s.density = parse_cosine_terms(*d, r.path("density"));
  if (const Json* v = r.child("velocity")) s.velocity = parse_cosine_terms(*v, r.path("velocity"));
  r.get("amplitude", s.amplitude);
  r.get("k_max", s.k_max);
  r.get("n_max", s.n_max);
  r.get("zero_mean_macro", s.zero_mean_macro);
  r.get("eigen_k", s.eigen_k);
  r.finish();
}

Json to_json(const kinetic::AlignmentKernel& k) {
  return Json{{"mode", to_string(k.mode)}, {"beta", k.beta}, {"epsilon", k.epsilon}};
}

void from_json(const Json& j, kinetic::AlignmentKernel& k, const std::string& path) {
  ObjectReader r(j, path);
  std::string mode = to_string(k.mode);
  r.get("mode", mode);
  k.mode = parse_enum(mode, kModes, r.path("mode"));
  r.get("beta", k.beta);
  r.get("epsilon", k.epsilon);
  r.finish();
}

Json to_json(const diag::EnergyWeights& w) { return Json{{"nu1", w.nu1}, {"nu2", w.nu2}, {"C", w.C}}; }

void from_json(const Json& j, diag::EnergyWeights& w, const std::string& path) {
  ObjectReader r(j, path);
  r.get("nu1", w.nu1);
  r.get("nu2", w.nu2);
  r.get("C", w.C);
  r.finish();
}

Json to_json(const kinetic::SolverConfig& c) {
  return Json{{"K", c.K},
              {"n_modes", c.n_modes},
              {"domain_length", c.domain_length},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"sobolev_order", c.sobolev_order},
              {"scheme", to_string(c.scheme)},
              {"kernel", to_json(c.kernel)},
              {"initial", to_json(c.initial)},
              {"weights", to_json(c.weights)},
              {"report_interval", c.report_interval},
              {"snapshot_interval", c.snapshot_interval},
              {"density_floor", c.density_floor},
              {"cfl", c.cfl},
              {"damping_number", c.damping_number}};
}

void from_json(const Json& j, kinetic::SolverConfig& c, const std::string& path) {
  ObjectReader r(j, path);
  r.get("K", c.K);
  r.get("n_modes", c.n_modes);
  r.get("domain_length", c.domain_length);
  r.get("dt", c.dt);
  r.get("t_end", c.t_end);
  r.get("sobolev_order", c.sobolev_order);
  std::string scheme = to_string(c.scheme);
  r.get("scheme", scheme);
  c.scheme = parse_enum(scheme, kSchemes, r.path("scheme"));
  if (const Json* k = r.child("kernel")) from_json(*k, c.kernel, r.path("kernel"));
  if (const Json* i = r.child("initial")) from_json(*i, c.initial, r.path("initial"));
  if (const Json* w = r.child("weights")) from_json(*w, c.weights, r.path("weights"));
  r.get("report_interval", c.report_interval);
  r.get("snapshot_interval", c.snapshot_interval);
  r.get("density_floor", c.density_floor);
  r.get("cfl", c.cfl);
  r.get("damping_number", c.damping_number);
  r.finish();
  kinetic::validate(c);
}

Json to_json(const particles::ModelSpec& s) {
  return Json{{"kind", to_string(s.kind)},
              {"beta", s.beta},
              {"noise_amplitude", s.noise_amplitude},
              {"epsilon", s.epsilon},
              {"drift_enabled", s.drift_enabled},
              {"mesh_threshold", s.mesh_threshold},
              {"mesh_points", s.mesh_points}};
}

void from_json(const Json& j, particles::ModelSpec& s, const std::string& path) {
  ObjectReader r(j, path);
  std::string kind = to_string(s.kind);
  r.get("kind", kind);
  s.kind = parse_enum(kind, kModels, r.path("kind"));
  r.get("beta", s.beta);
  r.get("noise_amplitude", s.noise_amplitude);
  r.get("epsilon", s.epsilon);
  r.get("drift_enabled", s.drift_enabled);
  r.get("mesh_threshold", s.mesh_threshold);
  r.get("mesh_points", s.mesh_points);
  r.finish();
  particles::validate(s);
}

Json to_json(const particles::ParticleRunConfig& c) {
  return Json{{"n_agents", c.n_agents},
              {"domain_length", c.domain_length},
              {"dt", c.dt},
              {"t_end", c.t_end},
              {"model", to_json(c.model)},
              {"density", cosine_terms_json(c.density)},
              {"velocity", cosine_terms_json(c.velocity)},
              {"n_bins", c.n_bins},
              {"sample_interval", c.sample_interval}};
}

void from_json(const Json& j, particles::ParticleRunConfig& c, const std::string& path) {
  ObjectReader r(j, path);
  r.get("n_agents", c.n_agents);
  r.get("domain_length", c.domain_length);
  r.get("dt", c.dt);
  r.get("t_end", c.t_end);
  if (const Json* m = r.child("model")) from_json(*m, c.model, r.path("model"));
  if (const Json* d = r.child("density")) c.density = parse_cosine_terms(*d, r.path("density"));
  if (const Json* v = r.child("velocity")) c.velocity = parse_cosine_terms(*v, r.path("velocity"));
  r.get("n_bins", c.n_bins);
  r.get("sample_interval", c.sample_interval);
  r.finish();
  particles::validate(c);
}

Json to_json(const hypo::WavenumberQuadrature& q) {
  return Json{{"panels", q.panels}, {"points_per_panel", q.points_per_panel}, {"k_first", q.k_first}, {"k_max", q.k_max}};
}

void from_json(const Json& j, hypo::WavenumberQuadrature& q, const std::string& path) {
  ObjectReader r(j, path);
  r.get("panels", q.panels);
  r.get("points_per_panel", q.points_per_panel);
  r.get("k_first", q.k_first);
  r.get("k_max", q.k_max);
  r.finish();
}

Json to_json(const hypo::SemigroupConfig& c) {
  return Json{{"n_modes", c.n_modes},     {"kappa", c.kappa},   {"quadrature", to_json(c.quadrature)},
              {"tail_tolerance", c.tail_tolerance}, {"fit_t0", c.fit_t0}, {"fit_t1", c.fit_t1}};
}

void from_json(const Json& j, hypo::SemigroupConfig& c, const std::string& path) {
  ObjectReader r(j, path);
  r.get("n_modes", c.n_modes);
  r.get("kappa", c.kappa);
  if (const Json* q = r.child("quadrature")) from_json(*q, c.quadrature, r.path("quadrature"));
  r.get("tail_tolerance", c.tail_tolerance);
  r.get("fit_t0", c.fit_t0);
  r.get("fit_t1", c.fit_t1);
  r.finish();
}

Json to_json(const diag::EnergyReport& e) {
  Json j{{"t", e.t},
         {"l2", e.l2},
         {"hs", e.hs},
         {"mass", e.mass},
         {"momentum", e.momentum},
         {"micro_mu", e.micro_mu},
         {"grad_ab", e.grad_ab},
         {"E0", e.E0},
         {"E_total", e.E_total},
         {"D_total", e.D_total},
         {"Aij", {{"A11", e.A11}, {"A11_ell", e.A11_ell}, {"r_norm", e.r_norm}}},
         {"energy_ratio", e.energy_ratio},
         {"min_density", e.min_density},
         {"closure_flux", e.closure_flux}};
  if (e.has_residuals) {
    j["residual_mass"] = e.residual_mass;
    j["residual_momentum"] = e.residual_momentum;
    j["residual_Aij"] = e.residual_A11;
  } else {
    j["residual_mass"] = nullptr;
    j["residual_momentum"] = nullptr;
    j["residual_Aij"] = nullptr;
  }
  return j;
}

bool ExperimentManifest::operator==(const ExperimentManifest& o) const {
  return name == o.name && subcommand == o.subcommand && seed == o.seed && output == o.output &&
         config == o.config && tolerances == o.tolerances;
}

Json to_json(const ExperimentManifest& m) {
  Json tol = Json::object();
  for (const auto& [k, v] : m.tolerances) tol[k] = v;
  return Json{{"name", m.name}, {"subcommand", m.subcommand}, {"seed", m.seed},
              {"output", m.output}, {"config", m.config},       {"tolerances", tol}};
}

ExperimentManifest parse_manifest(const Json& j) {
  static const std::set<std::string> subcommands = {"simulate", "linear", "particles", "compare", "fit", "sweep"};
  ObjectReader r(j, "manifest");
  ExperimentManifest m;
  r.get("name", m.name);
  r.get("subcommand", m.subcommand);
  r.get("seed", m.seed);
  r.get("output", m.output);
  if (const Json* c = r.child("config")) {
    require_object(*c, "manifest.config");
    m.config = *c;
  }
  r.get("tolerances", m.tolerances);
  r.finish();
  if (m.name.empty()) fail(ErrorKind::Config, "manifest.name must be non-empty");
  if (!subcommands.count(m.subcommand)) fail(ErrorKind::Config, "manifest.subcommand '" + m.subcommand + "' is unknown");
  return m;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, path + ": " + e.what());
  }
}

ExperimentManifest load_manifest(const std::string& path) { return parse_manifest(load_json_file(path)); }

}  // namespace kflock::io
