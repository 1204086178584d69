#include "kodaira/instance.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>

namespace kodaira {

using Json = nlohmann::json;

namespace {

// Typed, path-aware view of a JSON value.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const Json& raw() const { return *j_; }

  [[noreturn]] void fail(const std::string& what) const { throw InputError(path_ + ": " + what); }

  // Requires an object whose keys are all listed.
  void only(std::initializer_list<std::string_view> keys) const {
    if (!j_->is_object()) fail("expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) fail("unknown field '" + it.key() + "'");
  }
  bool has(const char* key) const { return j_->contains(key); }
  Node at(const char* key) const {
    if (!j_->contains(key)) fail(std::string("missing field '") + key + "'");
    return {j_->at(key), path_ + "." + key};
  }
  std::optional<Node> find(const char* key) const {
    if (!j_->contains(key)) return std::nullopt;
    return Node(j_->at(key), path_ + "." + key);
  }

  std::int64_t integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<std::int64_t>();
  }
  std::int64_t positive() const {
    const std::int64_t v = integer();
    if (v < 1) fail("expected a positive integer");
    return v;
  }
  std::size_t index() const {
    const std::int64_t v = integer();
    if (v < 0) fail("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected a boolean");
    return j_->get<bool>();
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  // "p/q" strings or JSON integers; floating point is rejected.
  Rational rational() const {
    if (j_->is_number_integer()) return Rational(j_->get<std::int64_t>());
    if (!j_->is_string()) fail("expected a rational as \"p/q\" string or an integer");
    try {
      return parse_rational(j_->get<std::string>());
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  std::vector<Node> items() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }
  std::vector<std::int64_t> integers() const {
    std::vector<std::int64_t> out;
    for (const auto& n : items()) out.push_back(n.integer());
    return out;
  }
  std::vector<Rational> rationals() const {
    std::vector<Rational> out;
    for (const auto& n : items()) out.push_back(n.rational());
    return out;
  }

 private:
  const Json* j_;
  std::string path_;
};

template <class F>
auto within(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind("$", 0) == 0) throw;
    n.fail(msg);
  }
}

ToricVariety parse_variety(const Node& n) {
  n.only({"preset", "n", "a", "factors", "rays", "cones", "name"});
  const std::string preset = n.at("preset").string();
  if (preset == "projective_space") {
    n.only({"preset", "n"});
    const std::int64_t dim = n.at("n").positive();
    if (dim > 4) n.fail("projective spaces above dimension 4 are not supported");
    return ToricVariety::projective_space(static_cast<std::size_t>(dim));
  }
  if (preset == "hirzebruch") {
    n.only({"preset", "a"});
    const std::int64_t a = n.at("a").integer();
    if (a < 0) n.fail("hirzebruch parameter must be nonnegative");
    return ToricVariety::hirzebruch(a);
  }
  if (preset == "product") {
    n.only({"preset", "factors"});
    const auto factors = n.at("factors").items();
    if (factors.size() < 2) n.fail("a product needs at least two factors");
    ToricVariety x = parse_variety(factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i) x = ToricVariety::product(x, parse_variety(factors[i]));
    return x;
  }
  if (preset == "fan") {
    n.only({"preset", "n", "rays", "cones", "name"});
    const std::size_t dim = static_cast<std::size_t>(n.at("n").positive());
    std::vector<IntVec> rays;
    for (const auto& r : n.at("rays").items()) {
      IntVec v;
      for (auto c : r.integers()) v.emplace_back(c);
      if (v.size() != dim) r.fail("ray has wrong length");
      rays.push_back(std::move(v));
    }
    std::vector<std::vector<std::size_t>> cones;
    for (const auto& c : n.at("cones").items()) {
      std::vector<std::size_t> cone;
      for (const auto& i : c.items()) cone.push_back(i.index());
      cones.push_back(std::move(cone));
    }
    const std::string name = n.has("name") ? n.at("name").string() : "fan";
    return within(n, [&] { return ToricVariety::from_fan(dim, std::move(rays), std::move(cones), name); });
  }
  n.at("preset").fail("unknown preset '" + preset + "'");
}

ToricDivisorData parse_divisor(const Node& n, std::size_t rays) {
  ToricDivisorData d{n.rationals()};
  if (d.coeffs.size() != rays)
    n.fail("expected " + std::to_string(rays) + " coefficients, got " + std::to_string(d.coeffs.size()));
  return d;
}

SingularMetricData parse_metric(const Node& n, const char* id_key, std::size_t divisors) {
  SingularMetricData h;
  for (const auto& e : n.items()) {
    e.only({id_key, "mu"});
    h.entries.push_back({e.at(id_key).index(), e.at("mu").rational()});
  }
  within(n, [&] { h.validate(divisors); });
  return h;
}

std::vector<std::size_t> parse_indices(const Node& n) {
  std::vector<std::size_t> out;
  for (const auto& i : n.items()) out.push_back(i.index());
  return out;
}

LatticePoint parse_point(const Node& n, std::size_t len) {
  LatticePoint p;
  for (auto c : n.integers()) p.push_back(c);
  if (p.size() != len) n.fail("expected " + std::to_string(len) + " coordinates");
  return p;
}

SemigroupBody parse_semigroup(const Node& n) {
  n.only({"ambient_rank", "generators", "levels", "product_closed", "growth_k"});
  SemigroupBody b;
  b.n = n.at("ambient_rank").index();
  if (n.has("growth_k")) b.growth_k = n.at("growth_k").positive();
  if (n.has("generators") == n.has("levels")) n.fail("give exactly one of 'generators' and 'levels'");
  if (n.has("generators")) {
    if (n.has("product_closed")) n.fail("'product_closed' applies to 'levels' only");
    for (const auto& g : n.at("generators").items()) {
      b.generators.push_back(parse_point(g, b.n + 1));
      if (b.generators.back().back() <= 0) g.fail("generator level must be positive");
    }
    return b;
  }
  b.from_levels = true;
  b.product_closed = n.has("product_closed") ? n.at("product_closed").boolean() : true;
  b.levels.emplace_back();
  for (const auto& level : n.at("levels").items()) {
    std::vector<LatticePoint> pts;
    for (const auto& p : level.items()) pts.push_back(parse_point(p, b.n));
    b.levels.push_back(std::move(pts));
  }
  return b;
}

ToricKappaBody parse_toric_kappa(const Node& n) {
  n.only({"variety", "m", "metric", "ample", "okounkov_degree"});
  ToricKappaBody b;
  b.x = parse_variety(n.at("variety"));
  b.m = parse_divisor(n.at("m"), b.x.ray_count());
  if (n.has("metric")) b.h = parse_metric(n.at("metric"), "ray", b.x.ray_count());
  if (n.has("ample")) {
    b.ample = parse_divisor(n.at("ample"), b.x.ray_count());
    if (!is_ample(b.x, *b.ample)) n.at("ample").fail("divisor is not ample");
  }
  if (n.has("okounkov_degree")) b.okounkov_degree = n.at("okounkov_degree").positive();
  return b;
}

LogDivisors parse_log(const Node& n) {
  n.only({"x", "x_points", "y"});
  LogDivisors l;
  if (n.has("x")) l.x = parse_indices(n.at("x"));
  if (n.has("x_points")) l.x_points = parse_indices(n.at("x_points"));
  if (n.has("y")) l.y = parse_indices(n.at("y"));
  return l;
}

FibrationBody parse_fibration(const Node& n, const std::string& id) {
  n.only({"variant", "base", "fiber", "total", "a", "curve", "factor", "m", "metric", "log", "sweep", "ample_x",
          "ample_y"});
  FibrationBody b;
  b.variant = n.at("variant").string();
  b.sweep = n.has("sweep") && n.at("sweep").boolean();
  const bool log = n.has("log");
  if (b.sweep && (log || n.has("m") || n.has("metric")))
    n.fail("a boundary sweep takes no 'm', 'metric' or 'log'");
  if (!b.sweep && log && (n.has("m") || n.has("metric")))
    n.fail("log instances take no 'm' or 'metric'; L is the boundary divisor");
  if (!b.sweep && !log && !n.has("m")) n.fail("missing field 'm'");

  if (b.variant == "curve_times_toric") {
    if (b.sweep) n.fail("boundary sweeps are defined for toric variants only");
    for (const char* k : {"base", "fiber", "total", "a"})
      if (n.has(k)) n.fail(std::string("field '") + k + "' does not apply to curve_times_toric");
    const Node c = n.at("curve");
    c.only({"genus", "points", "line_degree", "metric"});
    CurveSystem y;
    y.curve.genus = c.at("genus").integer();
    if (y.curve.genus < 0) c.at("genus").fail("genus must be nonnegative");
    if (c.has("points")) y.points = c.at("points").index();
    const ToricVariety f = parse_variety(n.at("factor"));
    FiberSpaceInstance inst;
    if (log) {
      if (c.has("line_degree") || c.has("metric")) c.fail("log instances take no 'line_degree' or 'metric'");
      inst = within(n, [&] { return curve_log_instance(id, y.curve, y.points, f, parse_log(n.at("log"))); });
    } else {
      if (c.has("line_degree")) y.line_degree = c.at("line_degree").integer();
      if (c.has("metric")) y.metric = parse_metric(c.at("metric"), "point", y.points);
      const ToricDivisorData m = parse_divisor(n.at("m"), f.ray_count());
      SingularMetricData h;
      if (n.has("metric")) h = parse_metric(n.at("metric"), "ray", f.ray_count());
      inst = within(n, [&] { return curve_metric_instance(id, y, f, m, h); });
    }
    if (n.has("ample_x")) inst.ample_x = parse_divisor(n.at("ample_x"), f.ray_count());
    if (n.has("ample_y")) n.fail("the base ample of a curve is fixed by its degree");
    within(n, [&] { inst.validate(); });
    b.instances.push_back(std::move(inst));
    return b;
  }

  if (n.has("curve") || n.has("factor")) n.fail("'curve' and 'factor' apply to curve_times_toric only");
  ToricFibration fib;
  if (b.variant == "toric_product") {
    for (const char* k : {"total", "a"})
      if (n.has(k)) n.fail(std::string("field '") + k + "' does not apply to toric_product");
    const ToricVariety base = parse_variety(n.at("base"));
    const ToricVariety fiber = parse_variety(n.at("fiber"));
    fib = within(n, [&] { return ToricFibration::product(base, fiber); });
  } else if (b.variant == "hirzebruch") {
    for (const char* k : {"base", "fiber", "total"})
      if (n.has(k)) n.fail(std::string("field '") + k + "' does not apply to hirzebruch");
    const std::int64_t a = n.at("a").integer();
    if (a < 0) n.at("a").fail("hirzebruch parameter must be nonnegative");
    fib = ToricFibration::hirzebruch(a);
  } else if (b.variant == "projection") {
    for (const char* k : {"fiber", "a"})
      if (n.has(k)) n.fail(std::string("field '") + k + "' does not apply to projection");
    const ToricVariety total = parse_variety(n.at("total"));
    const ToricVariety base = parse_variety(n.at("base"));
    fib = within(n, [&] { return ToricFibration::make(total, base); });
  } else {
    n.at("variant").fail("unknown variant '" + b.variant + "'");
  }

  std::optional<ToricDivisorData> ax, ay;
  if (n.has("ample_x")) ax = parse_divisor(n.at("ample_x"), fib.total.ray_count());
  if (n.has("ample_y")) ay = parse_divisor(n.at("ample_y"), fib.base.ray_count());
  if (b.sweep) {
    b.instances = boundary_sweep(id, fib);
  } else if (log) {
    b.instances.push_back(within(n, [&] { return toric_log_instance(id, fib, parse_log(n.at("log"))); }));
  } else {
    const ToricDivisorData m = parse_divisor(n.at("m"), fib.total.ray_count());
    SingularMetricData h;
    if (n.has("metric")) h = parse_metric(n.at("metric"), "ray", fib.total.ray_count());
    b.instances.push_back(within(n, [&] { return toric_metric_instance(id, fib, m, h); }));
  }
  for (auto& inst : b.instances) {
    inst.ample_x = ax;
    inst.ample_y = ay;
    within(n, [&] { inst.validate(); });
  }
  return b;
}

MultiplierBody parse_multiplier(const Node& n) {
  n.only({"mu", "grid", "k_max", "levels"});
  MultiplierBody b;
  if (n.has("mu") == n.has("grid")) n.fail("give exactly one of 'mu' and 'grid'");
  if (n.has("mu")) {
    b.mu = n.at("mu").rationals();
    for (const auto& m : b.mu)
      if (m < 0) n.at("mu").fail("weights must be nonnegative");
  } else {
    const Node g = n.at("grid");
    g.only({"max_mu", "max_denominator"});
    const Rational top = g.at("max_mu").rational();
    if (top < 0) g.at("max_mu").fail("must be nonnegative");
    const std::int64_t qmax = g.at("max_denominator").positive();
    if (qmax > 64) g.at("max_denominator").fail("at most 64");
    std::set<Rational> grid;
    for (std::int64_t q = 1; q <= qmax; ++q)
      for (std::int64_t p = 0; Rational(p, q) <= top; ++p) grid.insert(Rational(p, q));
    b.mu.assign(grid.begin(), grid.end());
  }
  if (n.has("k_max")) b.k_max = n.at("k_max").positive();
  if (b.k_max > 1000) n.at("k_max").fail("at most 1000");
  if (n.has("levels"))
    for (const auto& l : n.at("levels").items()) b.levels.push_back(l.positive());
  return b;
}

FileOptions parse_options(const Node& n) {
  n.only({"max_degree", "strides", "format", "addti"});
  FileOptions o;
  if (n.has("max_degree")) o.max_degree = n.at("max_degree").positive();
  if (n.has("strides"))
    for (const auto& s : n.at("strides").items()) o.strides.push_back(s.positive());
  if (n.has("format")) {
    o.format = parse_format(n.at("format").string());
    if (!o.format) n.at("format").fail("expected text, json or csv");
  }
  if (n.has("addti")) o.addti = n.at("addti").boolean();
  return o;
}

// ---- serialization ----------------------------------------------------------

Json ext(ExtInt v) { return v.is_finite() ? Json(v.value()) : Json(nullptr); }

Json num(const Integer& z) {
  if (z >= std::numeric_limits<std::int64_t>::min() && z <= std::numeric_limits<std::int64_t>::max())
    return Json(to_int64(z));
  return Json(z.str());
}

Json rat(const Rational& q) { return format_rational(q); }

Json rats(const RatVec& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rat(q));
  return a;
}

Json ints(const IntVec& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(num(z));
  return a;
}

Json int_rows(const std::vector<IntVec>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(ints(r));
  return a;
}

Json polytope_json(const Polytope& p) {
  Json j;
  j["dim"] = ext(p.dim());
  j["bounded"] = p.is_bounded();
  Json v = Json::array();
  for (const auto& x : p.vertices()) v.push_back(rats(x));
  j["vertices"] = std::move(v);
  return j;
}

Json fit_json(const GrowthFit& f, std::int64_t multiple) {
  Json j;
  j["multiple"] = multiple;
  j["order"] = ext(f.order);
  j["period"] = f.period;
  j["slope"] = f.slope ? Json(*f.slope) : Json(nullptr);
  return j;
}

Json sigma_json(const SigmaResult& s) {
  Json j;
  j["exact"] = ext(s.exact);
  j["empirical"] = ext(s.empirical);
  Json per = Json::array();
  for (std::size_t i = 0; i < s.per_multiple.size(); ++i)
    per.push_back(fit_json(s.per_multiple[i], static_cast<std::int64_t>(i) + 1));
  j["per_multiple"] = std::move(per);
  return j;
}

Json part_json(const PartKappa& p) {
  Json j;
  j["kappa"] = ext(p.kappa());
  j["kappa1"] = {{"value", ext(p.k1.value)}, {"degree", p.k1.degree}};
  j["kappa2"] = {{"value", ext(p.k2.value)}, {"degree", p.k2.degree}};
  j["kappa3"] = {{"value", ext(p.k3.value)},
                 {"degree", p.k3.degree},
                 {"slope", p.k3.slope ? Json(*p.k3.slope) : Json(nullptr)}};
  j["kappa_sigma"] = sigma_json(p.sigma);
  return j;
}

Json term_json(const Term& t) { return {{"name", t.name}, {"value", ext(t.value)}}; }

Json verdict_json(const InequalityVerdict& v) {
  Json j;
  j["check"] = v.check;
  j["instance"] = v.instance;
  j["relation"] = to_string(v.relation);
  j["lhs"] = term_json(v.lhs);
  Json rhs = Json::array();
  for (const auto& t : v.rhs) rhs.push_back(term_json(t));
  j["rhs"] = std::move(rhs);
  j["holds"] = v.holds;
  j["vacuous"] = v.vacuous;
  j["note"] = v.note;
  return j;
}

Json iitaka_json(const IitakaResult& r) {
  Json j;
  j["degree"] = r.degree;
  j["image_dim"] = ext(r.image_dim);
  j["saturated_lattice"] = int_rows(r.saturated_lattice);
  j["fiber_rank"] = r.fiber_rank;
  j["fiber_kappa"] = ext(r.fiber_kappa);
  j["degrees_checked"] = r.degrees_checked;
  return j;
}

Json variety_json(const ToricVariety& x) {
  return {{"name", x.name}, {"n", x.n}, {"rays", int_rows(x.rays)}};
}

std::string cell(const Json& v) {
  if (v.is_null()) return "-inf";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string ext_cell(ExtInt v) { return v.str(); }

Json check(const std::string& name, bool holds, Json terms, std::string note = {}) {
  return {{"check", name}, {"holds", holds}, {"terms", std::move(terms)}, {"note", std::move(note)}};
}

// ---- runners ----------------------------------------------------------------

struct Context {
  const InstanceFile& file;
  std::int64_t max_degree;
  std::vector<std::int64_t> strides;
  const RunSettings& settings;
};

void run_semigroup(const SemigroupBody& b, const Context& ctx, RunResult& out) {
  const GradedSemigroup sg = b.from_levels ? GradedSemigroup::from_levels(b.n, b.levels, b.product_closed)
                                           : GradedSemigroup::from_generators(b.n, b.generators);
  Json& r = out.report;
  r["source"] = b.from_levels ? "levels" : "generators";
  r["ambient_rank"] = b.n;
  const Regularization reg = regularize(sg);
  r["group_rank"] = reg.group_rank();
  r["group_basis"] = int_rows(reg.group_basis);
  r["m"] = num(reg.m);
  r["ind"] = reg.ind ? num(*reg.ind) : Json("undefined");
  r["strongly_convex"] = reg.strongly_convex;
  r["boundary_lattice"] = int_rows(reg.boundary_lattice);
  r["okounkov_dim"] = ext(reg.okounkov_body.dim());
  Json verts = Json::array();
  for (const auto& v : reg.okounkov_body.vertices()) verts.push_back(rats(v));
  r["okounkov_vertices"] = std::move(verts);
  out.polytopes.push_back({"okounkov_body", reg.okounkov_body});

  std::int64_t top = ctx.max_degree;
  if (auto bound = sg.degree_bound()) top = std::min(top, *bound);
  Json table = Json::array();
  out.table.header = {"k", "hilbert", "hilbert_reg"};
  for (std::int64_t k = 0; k <= top; ++k) {
    const auto h = sg.hilbert(k);
    const auto hr = reg.strongly_convex ? Json(reg.hilbert_reg(k)) : Json(nullptr);
    table.push_back({{"k", k}, {"hilbert", h}, {"hilbert_reg", hr}});
    out.table.rows.push_back({std::to_string(k), std::to_string(h), hr.is_null() ? "" : hr.dump()});
  }
  r["hilbert"] = std::move(table);

  if (!reg.strongly_convex) {
    r["growth"] = nullptr;
    return;
  }
  const GrowthReport g = growth_law_check(reg, b.growth_k);
  Json gj;
  gj["q"] = g.q;
  gj["m"] = num(g.m);
  gj["k_max"] = g.k_max;
  gj["volume"] = rat(g.volume);
  gj["a_q_predicted"] = rat(g.a_q_predicted);
  gj["a_q_empirical"] = rat(g.a_q_empirical);
  gj["relative_gap"] = rat(g.relative_gap);
  gj["euclidean_over_ind"] = g.euclidean_over_ind ? rat(*g.euclidean_over_ind) : Json(nullptr);
  r["growth"] = std::move(gj);
}

void run_toric_kappa(ToricKappaBody b, const Context& ctx, RunResult& out) {
  if (ctx.settings.unclamped) b.h.clamp = false;
  Json& r = out.report;
  r["variety"] = variety_json(b.x);
  r["m"] = rats(b.m.coeffs);
  Json metric = Json::array();
  for (const auto& e : b.h.entries) metric.push_back({{"ray", e.divisor}, {"mu", rat(e.mu)}});
  r["metric"] = std::move(metric);
  r["k0"] = num(b.m.k0());

  const SectionSystem sys = section_system(b.x, b.m, b.h, ctx.max_degree);
  Json degrees = Json::array();
  out.table.header = {"k", "count", "affine_dim"};
  for (std::int64_t k = 1; k <= ctx.max_degree; ++k) {
    const int d = sys.affine_dim(k);
    const ExtInt dim = d < 0 ? ExtInt::neg_inf() : ExtInt(d);
    degrees.push_back({{"k", k}, {"count", sys.count(k)}, {"affine_dim", ext(dim)}});
    out.table.rows.push_back({std::to_string(k), std::to_string(sys.count(k)), ext_cell(dim)});
  }
  r["degrees"] = std::move(degrees);

  PartKappa p;
  p.k1 = kappa1(sys);
  p.k2 = kappa2(sys);
  p.k3 = kappa3(sys);
  const ToricDivisorData ample = b.ample ? *b.ample : find_ample(b.x);
  r["ample"] = rats(ample.coeffs);
  const GrowthOptions sigma_opts = certified({ctx.max_degree, 1}, b.x, b.m, b.h);
  r["sigma_max_degree"] = sigma_opts.max_degree;
  p.sigma = kappa_sigma(b.x, b.m, b.h, ample, sigma_opts);
  const Json pj = part_json(p);
  for (auto it = pj.begin(); it != pj.end(); ++it) r[it.key()] = it.value();

  const Polytope q_inf = limit_polytope(b.x, b.m, b.h);
  r["limit_polytope"] = polytope_json(q_inf);
  out.polytopes.push_back({"limit_polytope", q_inf});
  if (p.k2.degree > 0) {
    out.polytopes.push_back({"section_polytope_k" + std::to_string(p.k2.degree),
                             section_polytope(b.x, b.m, b.h, p.k2.degree)});
  }

  Json checks = Json::array();
  const bool eq = p.k1.value == p.k2.value && p.k2.value == p.k3.value;
  checks.push_back(check("eqji", eq,
                         {{{"name", "kappa1"}, {"value", ext(p.k1.value)}},
                          {{"name", "kappa2"}, {"value", ext(p.k2.value)}},
                          {{"name", "kappa3"}, {"value", ext(p.k3.value)}}}));
  checks.push_back(check("kappa_leq_kappa_sigma", p.kappa() <= p.sigma.exact,
                         {{{"name", "kappa"}, {"value", ext(p.kappa())}},
                          {{"name", "kappa_sigma"}, {"value", ext(p.sigma.exact)}}}));

  // Newton–Okounkov body of the degreewise semigroup up to a small bound.
  const std::int64_t ok_deg = std::min(b.okounkov_degree, ctx.max_degree);
  const SectionSystem small = section_system(b.x, b.m, b.h, ok_deg);
  if (!small.support().empty()) {
    std::vector<std::vector<LatticePoint>> levels;
    for (std::int64_t k = 0; k <= ok_deg; ++k) levels.push_back(small.points(k));
    const Regularization reg = regularize(GradedSemigroup::from_levels(b.x.n, levels, true));
    const ExtInt k2_small = kappa2(small).value;
    checks.push_back(check("okounkov", reg.okounkov_body.dim() == k2_small,
                           {{{"name", "dim_okounkov_body"}, {"value", ext(reg.okounkov_body.dim())}},
                            {{"name", "kappa2"}, {"value", ext(k2_small)}}},
                           "levels 1.." + std::to_string(ok_deg)));
  }

  if (auto k = iitaka_degree(sys)) {
    const IitakaResult it = iitaka_analysis(sys, *k);
    r["iitaka"] = iitaka_json(it);
    checks.push_back(check("iitaka_fibration", it.image_dim == p.kappa() && it.fiber_kappa == ExtInt(0),
                           {{{"name", "image_dim"}, {"value", ext(it.image_dim)}},
                            {{"name", "kappa"}, {"value", ext(p.kappa())}},
                            {{"name", "fiber_kappa"}, {"value", ext(it.fiber_kappa)}}}));
  } else {
    r["iitaka"] = nullptr;
  }

  for (auto a : ctx.strides) {
    const GrowthOptions so = certified({ctx.max_degree, a}, b.x, b.m, b.h);
    const SigmaResult s = kappa_sigma(b.x, b.m, b.h, ample, so);
    checks.push_back(check("simple", s.empirical == p.sigma.exact,
                           {{{"name", "kappa_sigma_a"}, {"value", ext(s.empirical)}},
                            {{"name", "kappa_sigma"}, {"value", ext(p.sigma.exact)}}},
                           "a=" + std::to_string(a)));
  }
  bool all = true;
  for (const auto& c : checks) all = all && c["holds"].get<bool>();
  r["checks"] = std::move(checks);
  if (!all) out.exit_code = exit_verdict;
}

Json fibration_instance_json(const FiberSpaceInstance& inst, const FibrationRun& run) {
  const KappaReport& k = run.report;
  Json j;
  j["id"] = inst.id;
  j["variant"] = to_string(inst.variant);
  j["total_dim"] = k.total_dim;
  j["base_dim"] = k.base_dim;
  j["max_degree"] = k.max_degree;
  j["total"] = part_json(k.total);
  j["total"]["kappa_sigma_hor"] = sigma_json(k.total_sigma_hor);
  j["fiber"] = part_json(k.fiber);
  j["base"] = part_json(k.base);
  j["iitaka"] = run.iitaka ? iitaka_json(*run.iitaka) : Json(nullptr);
  Json vs = Json::array();
  for (const auto& v : run.verdicts) vs.push_back(verdict_json(v));
  j["verdicts"] = std::move(vs);
  return j;
}

void run_fibration_body(FibrationBody b, const Context& ctx, RunResult& out) {
  FibrationOptions opts;
  opts.growth.max_degree = ctx.max_degree;
  opts.strides = ctx.strides;
  if (ctx.file.options.addti) opts.addti = *ctx.file.options.addti;
  if (ctx.settings.unclamped) {
    for (auto& inst : b.instances) {
      inst.h.clamp = false;
      if (inst.curve) inst.curve->metric.clamp = false;
    }
  }

  const std::size_t count = b.instances.size();
  std::vector<std::optional<FibrationRun>> runs(count);
  std::vector<std::exception_ptr> errors(count);
  auto work = [&](std::size_t first, std::size_t step) {
    for (std::size_t i = first; i < count; i += step) {
      try {
        runs[i] = run_fibration(b.instances[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(ctx.settings.jobs, count));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Json& r = out.report;
  r["variant"] = b.variant;
  r["sweep"] = b.sweep;
  Json instances = Json::array();
  std::size_t verdicts = 0, failed = 0;
  out.table.header = {"instance", "check", "relation", "lhs", "rhs", "holds", "vacuous", "note"};
  for (std::size_t i = 0; i < count; ++i) {
    instances.push_back(fibration_instance_json(b.instances[i], *runs[i]));
    for (const auto& v : runs[i]->verdicts) {
      ++verdicts;
      failed += !v.holds;
      std::string rhs;
      for (const auto& t : v.rhs) rhs += (rhs.empty() ? "" : " ") + t.name + "=" + t.value.str();
      out.table.rows.push_back({v.instance, v.check, to_string(v.relation), v.lhs.name + "=" + v.lhs.value.str(),
                                rhs, v.holds ? "true" : "false", v.vacuous ? "true" : "false", v.note});
    }
  }
  r["instances"] = std::move(instances);
  r["verdict_count"] = verdicts;
  r["failed"] = failed;
  if (failed) out.exit_code = exit_verdict;
}

void run_multiplier(const MultiplierBody& b, const Context& ctx, RunResult& out) {
  const bool clamp = !ctx.settings.unclamped;
  const SubadditivityReport rep = subadditivity_scan(b.mu, b.k_max, clamp);
  Json& r = out.report;
  r["mu_count"] = b.mu.size();
  r["k_max"] = b.k_max;
  r["clamp"] = clamp;
  r["checked"] = rep.checked;
  Json viol = Json::array();
  for (const auto& v : rep.violations)
    viol.push_back({{"mu", rat(v.mu)}, {"k", v.k}, {"l", v.l}, {"c_k", num(v.c_k)}, {"c_l", num(v.c_l)},
                    {"c_k_plus_l", num(v.c_kl)}});
  r["violations"] = std::move(viol);
  Json table = Json::array();
  out.table.header = {"mu", "k", "c_k", "limit"};
  for (const auto& mu : b.mu) {
    if (b.levels.empty()) break;
    Json row;
    row["mu"] = rat(mu);
    row["limit"] = rat(coeff_limit(mu));
    Json cs = Json::array();
    for (auto k : b.levels) {
      const Integer c = multiplier_coeff(mu, k, clamp);
      cs.push_back({{"k", k}, {"c", num(c)}});
      out.table.rows.push_back({format_rational(mu), std::to_string(k), c.str(), format_rational(coeff_limit(mu))});
    }
    row["coefficients"] = std::move(cs);
    table.push_back(std::move(row));
  }
  r["table"] = std::move(table);
  if (!rep.violations.empty()) out.exit_code = exit_verdict;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- rendering ----------------------------------------------------------------

bool scalar_array(const Json& a) {
  for (const auto& v : a)
    if (v.is_object() || (v.is_array() && !scalar_array(v))) return false;
  return true;
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "-inf";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + scalar_text(v[i]);
    return s + "]";
  }
  return v.dump();
}

void text_node(std::ostringstream& os, const Json& j, int indent, bool color) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object()) {
      os << pad << it.key() << ":\n";
      text_node(os, v, indent + 2, color);
    } else if (v.is_array() && !scalar_array(v)) {
      os << pad << it.key() << ":\n";
      for (const auto& item : v) {
        if (item.is_object()) {
          os << pad << "  -\n";
          text_node(os, item, indent + 4, color);
        } else {
          os << pad << "  - " << scalar_text(item) << "\n";
        }
      }
    } else {
      std::string s = scalar_text(v);
      if (color && v.is_boolean() && (it.key() == "holds" || it.key() == "passed"))
        s = (v.get<bool>() ? "\033[32m" : "\033[31m") + s + "\033[0m";
      if (color && it.key() == "status") s = (s == "ok" ? "\033[32m" : "\033[31m") + s + "\033[0m";
      os << pad << it.key() << ": " << s << "\n";
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::optional<Format> parse_format(const std::string& s) {
  if (s == "text") return Format::text;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  return std::nullopt;
}

InstanceFile parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  const Node root(j, "$");
  root.only({"schema_version", "kind", "id", "body", "options"});
  InstanceFile f;
  f.schema_version = root.at("schema_version").string();
  if (f.schema_version != kSchemaVersion)
    root.at("schema_version").fail("unsupported schema_version '" + f.schema_version + "'");
  f.kind = root.at("kind").string();
  f.id = root.has("id") ? root.at("id").string() : f.kind;
  if (root.has("options")) f.options = parse_options(root.at("options"));
  const Node body = root.at("body");
  if (f.kind == "semigroup") f.body = parse_semigroup(body);
  else if (f.kind == "toric_kappa") f.body = parse_toric_kappa(body);
  else if (f.kind == "fibration") f.body = parse_fibration(body, f.id);
  else if (f.kind == "multiplier_scan") f.body = parse_multiplier(body);
  else root.at("kind").fail("unknown kind '" + f.kind + "'");
  return f;
}

RunResult run_instance(const InstanceFile& file, const RunSettings& settings) {
  const std::int64_t k = settings.max_degree.value_or(file.options.max_degree.value_or(kDefaultMaxDegree));
  std::vector<std::int64_t> strides = file.options.strides.empty() ? std::vector<std::int64_t>{2, 3, 5}
                                                                   : file.options.strides;
  if (settings.stride) strides = {*settings.stride};
  const Context ctx{file, k, strides, settings};

  RunResult out;
  Json& r = out.report;
  r["schema_version"] = kSchemaVersion;
  r["id"] = file.id;
  r["kind"] = file.kind;
  r["max_degree"] = k;
  r["strides"] = strides;
  if (settings.timestamps) r["generated_at"] = utc_now();
  try {
    if (k < 1) throw InputError("degree bound must be positive");
    std::visit(
        [&](const auto& b) {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, SemigroupBody>) run_semigroup(b, ctx, out);
          else if constexpr (std::is_same_v<B, ToricKappaBody>) run_toric_kappa(b, ctx, out);
          else if constexpr (std::is_same_v<B, FibrationBody>) run_fibration_body(b, ctx, out);
          else run_multiplier(b, ctx, out);
        },
        file.body);
  } catch (const InputError& e) {
    out.exit_code = exit_input;
    r["error"] = e.what();
  } catch (const DegenerateError& e) {
    out.exit_code = exit_degenerate;
    r["error"] = e.what();
  } catch (const CrossCheckError& e) {
    out.exit_code = exit_cross_check;
    r["error"] = e.what();
  }
  if (out.exit_code == exit_input || out.exit_code == exit_degenerate || out.exit_code == exit_cross_check) {
    out.table = {};
    out.polytopes.clear();
  }
  r["exit_code"] = out.exit_code;
  r["status"] = out.exit_code == exit_ok ? "ok" : out.exit_code == exit_verdict ? "failed" : "error";
  return out;
}

RunResult input_failure(const std::string& message) {
  RunResult out;
  out.exit_code = exit_input;
  out.report["schema_version"] = kSchemaVersion;
  out.report["error"] = message;
  out.report["exit_code"] = exit_input;
  out.report["status"] = "error";
  return out;
}

std::string render(const RunResult& r, Format f, bool color) {
  switch (f) {
    case Format::json:
      return r.report.dump(2) + "\n";
    case Format::csv: {
      std::ostringstream os;
      if (r.table.header.empty()) {
        os << "status,exit_code,error\n"
           << csv_field(r.report.value("status", "")) << "," << r.exit_code << ","
           << csv_field(r.report.contains("error") ? cell(r.report["error"]) : "") << "\n";
        return os.str();
      }
      for (std::size_t i = 0; i < r.table.header.size(); ++i) os << (i ? "," : "") << csv_field(r.table.header[i]);
      os << "\n";
      for (const auto& row : r.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
      }
      return os.str();
    }
    case Format::text: {
      std::ostringstream os;
      text_node(os, r.report, 0, color);
      return os.str();
    }
  }
  return {};
}

std::string export_polytopes(const RunResult& r) {
  std::ostringstream os;
  if (r.polytopes.empty()) os << "# no polytopes\n";
  for (const auto& p : r.polytopes) {
    os << "# " << p.name << " dim " << p.poly.dim().str() << (p.poly.is_bounded() ? "" : " unbounded") << "\n";
    os << "nOFF\n" << p.poly.ambient_dim() << "\n" << p.poly.vertices().size() << " 0 0\n";
    for (const auto& v : p.poly.vertices()) {
      std::string exact;
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? " " : "") << static_cast<double>(v[i]);
        exact += (i ? " " : "") + format_rational(v[i]);
      }
      os << "  # " << exact << "\n";
    }
  }
  return os.str();
}

}  // namespace kodaira
