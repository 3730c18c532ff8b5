#include "malab/config.hpp"

#include <cmath>
#include <set>

#include "malab/errors.hpp"

namespace malab {

using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::pair:
      return "pair";
    case Mode::converge:
      return "converge";
    case Mode::verify:
      return "verify";
    case Mode::oracle:
      return "oracle";
    case Mode::residue:
      return "residue";
  }
  return "converge";
}

bool InlineResidue::operator==(const InlineResidue& other) const {
  return factors == other.factors && theta.dim() == other.theta.dim() && theta.p() == other.theta.p() &&
         theta.q() == other.theta.q() && theta.max_abs_diff(other.theta) == 0.0 && psi == other.psi &&
         domain == other.domain && oracle == other.oracle;
}

namespace {

// Object reader that records consumed keys and rejects the rest.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw SchemaError(sub(key), "missing required field");
    seen_.insert(key);
    return j_.at(key);
  }

  const json* opt(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw SchemaError(sub(it.key()), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double num(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

const json& arr(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

cplx complex_of(const json& j, const std::string& path) {
  if (j.is_number()) return {num(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {num(j[0], idx(path, 0)), num(j[1], idx(path, 1))};
  throw SchemaError(path, "expected a number or [re, im]");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

std::vector<double> doubles(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < arr(j, path).size(); ++i) out.push_back(num(j[i], idx(path, i)));
  return out;
}

template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw SchemaError(path, e.what());
  }
}

Point point_of(const json& j, const std::string& path) {
  std::vector<cplx> c;
  for (std::size_t i = 0; i < arr(j, path).size(); ++i) c.push_back(complex_of(j[i], idx(path, i)));
  if (c.empty() || c.size() > static_cast<std::size_t>(kMaxDim)) throw SchemaError(path, "dimension must be 1..4");
  return Point(std::span<const cplx>(c));
}

json point_json(const Point& p) {
  json a = json::array();
  for (int k = 0; k < p.dim(); ++k) a.push_back(complex_json(p[k]));
  return a;
}

int dim_of(const json& j, const std::string& path) {
  const int n = integer(j, path);
  if (n < 1 || n > kMaxDim) throw SchemaError(path, "dimension must be 1..4");
  return n;
}

HoloPolynomial poly_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const int n = dim_of(o.at("n"), o.sub("n"));
  std::vector<HoloPolynomial::Term> terms;
  const json& ts = arr(o.at("terms"), o.sub("terms"));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Obj t(ts[i], idx(o.sub("terms"), i));
    HoloPolynomial::Term term{};
    const json& e = arr(t.at("exp"), t.sub("exp"));
    if (static_cast<int>(e.size()) != n) throw SchemaError(t.sub("exp"), "exponent length must equal n");
    for (std::size_t k = 0; k < e.size(); ++k) {
      const int x = integer(e[k], idx(t.sub("exp"), k));
      if (x < 0 || x > 31) throw SchemaError(idx(t.sub("exp"), k), "exponent must be in [0, 31]");
      term.exponents[k] = static_cast<std::uint8_t>(x);
    }
    term.coeff = complex_of(t.at("coeff"), t.sub("coeff"));
    t.finish();
    terms.push_back(term);
  }
  o.finish();
  return guarded(path, [&] { return HoloPolynomial(n, std::move(terms)); });
}

std::vector<int> exps_json_to(const json& e, int n, const std::string& path) {
  if (!e.is_array() || static_cast<int>(e.size()) != n) throw SchemaError(path, "exponent length must equal n");
  std::vector<int> out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    const int x = integer(e[k], idx(path, k));
    if (x < 0 || x > 31) throw SchemaError(idx(path, k), "exponent must be in [0, 31]");
    out.push_back(x);
  }
  return out;
}

json exps_json(const HoloPolynomial::Exponents& e, int n) {
  json a = json::array();
  for (int k = 0; k < n; ++k) a.push_back(static_cast<int>(e[static_cast<std::size_t>(k)]));
  return a;
}

SmoothPotential potential_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const std::string kind = str(o.at("kind"), o.sub("kind"));
  SmoothPotential out;
  if (kind == "constant") {
    const int n = dim_of(o.at("n"), o.sub("n"));
    out = SmoothPotential::constant(n, num(o.at("value"), o.sub("value")));
  } else if (kind == "combination") {
    const int n = dim_of(o.at("n"), o.sub("n"));
    std::vector<SmoothPotential::WeightedTerm> terms;
    const json& ts = arr(o.at("terms"), o.sub("terms"));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Obj t(ts[i], idx(o.sub("terms"), i));
      const double w = num(t.at("weight"), t.sub("weight"));
      SmoothPotential e = potential_of(t.at("expr"), t.sub("expr"));
      t.finish();
      terms.emplace_back(w, std::move(e));
    }
    out = guarded(path, [&] { return SmoothPotential::combination(n, std::move(terms)); });
  } else if (kind == "real_poly") {
    const int n = dim_of(o.at("n"), o.sub("n"));
    std::vector<SmoothPotential::RealPolyTerm> terms;
    const json& ts = arr(o.at("terms"), o.sub("terms"));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Obj t(ts[i], idx(o.sub("terms"), i));
      SmoothPotential::RealPolyTerm term{};
      const auto a = exps_json_to(t.at("z"), n, t.sub("z"));
      const auto b = exps_json_to(t.at("zbar"), n, t.sub("zbar"));
      for (int k = 0; k < n; ++k) {
        term.z[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(a[static_cast<std::size_t>(k)]);
        term.zbar[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(b[static_cast<std::size_t>(k)]);
      }
      term.coeff = complex_of(t.at("coeff"), t.sub("coeff"));
      t.finish();
      terms.push_back(term);
    }
    out = guarded(path, [&] { return SmoothPotential::real_poly(n, std::move(terms)); });
  } else if (kind == "log_one_plus") {
    std::vector<HoloPolynomial> polys;
    const json& ps = arr(o.at("polys"), o.sub("polys"));
    for (std::size_t i = 0; i < ps.size(); ++i) polys.push_back(poly_of(ps[i], idx(o.sub("polys"), i)));
    out = guarded(path, [&] { return SmoothPotential::log_one_plus(std::move(polys)); });
  } else {
    throw SchemaError(o.sub("kind"), "unknown potential kind '" + kind + "'");
  }
  o.finish();
  return out;
}

QpshFunction qpsh_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const double c = num(o.at("c"), o.sub("c"));
  if (!(c > 0.0)) throw SchemaError(o.sub("c"), "c must be positive");
  std::vector<HoloPolynomial> comps;
  const json& fs = arr(o.at("f"), o.sub("f"));
  if (fs.empty()) throw SchemaError(o.sub("f"), "f needs at least one component");
  for (std::size_t i = 0; i < fs.size(); ++i) comps.push_back(poly_of(fs[i], idx(o.sub("f"), i)));
  const int n = comps.front().dim();
  SmoothPotential v = SmoothPotential::zero(n);
  if (const json* vj = o.opt("v")) v = potential_of(*vj, o.sub("v"));
  o.finish();
  return guarded(path, [&] { return QpshFunction(c, HoloTuple(std::move(comps)), std::move(v)); });
}

CMatrix matrix_of(const json& j, const std::string& path) {
  const json& rows = arr(j, path);
  const auto n = rows.size();
  if (n < 1 || n > static_cast<std::size_t>(kMaxDim)) throw SchemaError(path, "matrix must be n x n with n in 1..4");
  CMatrix h(static_cast<int>(n), static_cast<int>(n));
  for (std::size_t p = 0; p < n; ++p) {
    const json& row = arr(rows[p], idx(path, p));
    if (row.size() != n) throw SchemaError(idx(path, p), "matrix must be square");
    for (std::size_t q = 0; q < n; ++q) {
      h(static_cast<int>(p), static_cast<int>(q)) = complex_of(row[q], idx(idx(path, p), q));
    }
  }
  return h;
}

ClosedOneOneForm form11_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const std::string kind = str(o.at("kind"), o.sub("kind"));
  ClosedOneOneForm out;
  if (kind == "constant") {
    const CMatrix h = matrix_of(o.at("matrix"), o.sub("matrix"));
    out = guarded(o.sub("matrix"), [&] { return ClosedOneOneForm::constant(h); });
  } else if (kind == "zero") {
    out = ClosedOneOneForm::zero(dim_of(o.at("n"), o.sub("n")));
  } else if (kind == "ddc") {
    out = ClosedOneOneForm::ddc_of(potential_of(o.at("potential"), o.sub("potential")));
  } else if (kind == "fubini_study") {
    out = ClosedOneOneForm::fubini_study(dim_of(o.at("n"), o.sub("n")));
  } else {
    throw SchemaError(o.sub("kind"), "unknown form kind '" + kind + "'");
  }
  o.finish();
  return out;
}

Cutoff cutoff_of(const json& j, const std::string& path) {
  Obj o(j, path);
  Cutoff def;
  const double a = o.has("a") ? num(o.at("a"), o.sub("a")) : def.a();
  const double b = o.has("b") ? num(o.at("b"), o.sub("b")) : def.b();
  CutoffProfile prof = CutoffProfile::quintic;
  if (const json* p = o.opt("profile")) {
    const std::string s = str(*p, o.sub("profile"));
    if (s == "quintic") {
      prof = CutoffProfile::quintic;
    } else if (s == "exponential") {
      prof = CutoffProfile::exponential;
    } else {
      throw SchemaError(o.sub("profile"), "unknown cutoff profile '" + s + "'");
    }
  }
  o.finish();
  return guarded(path, [&] { return Cutoff(a, b, prof); });
}

TestFunction test_function_of(const json& j, const std::string& path) {
  Obj o(j, path);
  TestFunction out;
  if (const json* u = o.opt("unit")) {
    const int n = dim_of(*u, o.sub("unit"));
    o.finish();
    return TestFunction::unit(n);
  }
  const Point c = point_of(o.at("center"), o.sub("center"));
  const json& rs = arr(o.at("radii"), o.sub("radii"));
  std::vector<std::optional<double>> radii;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].is_null()) {
      radii.push_back(std::nullopt);
    } else {
      radii.push_back(num(rs[i], idx(o.sub("radii"), i)));
    }
  }
  o.finish();
  return guarded(path, [&] { return TestFunction::bump(c, std::move(radii)); });
}

Domain domain_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const std::string kind = str(o.at("kind"), o.sub("kind"));
  Domain out;
  if (kind == "polydisc") {
    Polydisc p;
    p.center = point_of(o.at("center"), o.sub("center"));
    p.radii = doubles(o.at("radii"), o.sub("radii"));
    if (const json* l = o.opt("log_r_min")) p.log_r_min = num(*l, o.sub("log_r_min"));
    if (static_cast<int>(p.radii.size()) != p.dim()) throw SchemaError(o.sub("radii"), "one radius per coordinate");
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
      if (!(p.radii[i] > 0.0) || !(std::log(p.radii[i]) > p.log_r_min)) {
        throw SchemaError(idx(o.sub("radii"), i), "radius must be positive and above exp(log_r_min)");
      }
    }
    out = p;
  } else if (kind == "box") {
    Box b;
    b.center = point_of(o.at("center"), o.sub("center"));
    b.half_widths = doubles(o.at("half_widths"), o.sub("half_widths"));
    if (static_cast<int>(b.half_widths.size()) != 2 * b.dim()) {
      throw SchemaError(o.sub("half_widths"), "box needs 2n half-widths");
    }
    for (std::size_t i = 0; i < b.half_widths.size(); ++i) {
      if (!(b.half_widths[i] > 0.0)) throw SchemaError(idx(o.sub("half_widths"), i), "half-width must be positive");
    }
    out = b;
  } else {
    throw SchemaError(o.sub("kind"), "unknown domain kind '" + kind + "'");
  }
  o.finish();
  return out;
}

PathSchedule schedule_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const std::string kind = str(o.at("kind"), o.sub("kind"));
  PathSchedule out;
  if (kind == "polynomial") {
    std::vector<int> e;
    const json& ej = arr(o.at("exponents"), o.sub("exponents"));
    for (std::size_t i = 0; i < ej.size(); ++i) e.push_back(integer(ej[i], idx(o.sub("exponents"), i)));
    if (e.empty()) throw SchemaError(o.sub("exponents"), "empty schedule");
    std::vector<double> s;
    if (const json* sj = o.opt("scales")) s = doubles(*sj, o.sub("scales"));
    out = guarded(path, [&] { return PathSchedule::polynomial(std::move(e), std::move(s)); });
  } else if (kind == "table") {
    std::vector<double> nus = doubles(o.at("nus"), o.sub("nus"));
    std::vector<std::vector<double>> rows;
    const json& rj = arr(o.at("rows"), o.sub("rows"));
    for (std::size_t i = 0; i < rj.size(); ++i) rows.push_back(doubles(rj[i], idx(o.sub("rows"), i)));
    if (rows.empty() || rows.front().empty()) throw SchemaError(o.sub("rows"), "empty schedule");
    out = guarded(path, [&] { return PathSchedule::table(std::move(nus), std::move(rows)); });
  } else {
    throw SchemaError(o.sub("kind"), "unknown schedule kind '" + kind + "'");
  }
  o.finish();
  return out;
}

QuadratureSettings quadrature_of(const json& j, const std::string& path) {
  Obj o(j, path);
  QuadratureSettings s;
  if (const json* v = o.opt("order")) s.order = integer(*v, o.sub("order"));
  if (const json* v = o.opt("max_depth")) s.max_depth = integer(*v, o.sub("max_depth"));
  if (const json* v = o.opt("rel_tol")) s.rel_tol = num(*v, o.sub("rel_tol"));
  if (const json* v = o.opt("abs_tol")) s.abs_tol = num(*v, o.sub("abs_tol"));
  if (const json* v = o.opt("shell_refine")) {
    if (!v->is_boolean()) throw SchemaError(o.sub("shell_refine"), "expected a boolean");
    s.shell_refine = v->get<bool>();
  }
  if (const json* v = o.opt("max_evals")) {
    if (!v->is_number_integer()) throw SchemaError(o.sub("max_evals"), "expected an integer");
    s.max_evals = v->get<long long>();
  }
  if (const json* v = o.opt("workers")) s.workers = integer(*v, o.sub("workers"));
  o.finish();
  guarded(path, [&] {
    s.validate();
    return 0;
  });
  return s;
}

BidegreeForm form_of(const json& j, const std::string& path) {
  Obj o(j, path);
  const int n = dim_of(o.at("n"), o.sub("n"));
  const int p = integer(o.at("p"), o.sub("p"));
  const int q = integer(o.at("q"), o.sub("q"));
  if (p < 0 || q < 0 || p > n || q > n) throw SchemaError(path, "degrees must be in [0, n]");
  BidegreeForm out(n, p, q);
  const json& ts = arr(o.at("terms"), o.sub("terms"));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Obj t(ts[i], idx(o.sub("terms"), i));
    auto mask = [&](const char* key, int deg) {
      const json& a = arr(t.at(key), t.sub(key));
      if (static_cast<int>(a.size()) != deg) throw SchemaError(t.sub(key), "index count must equal the degree");
      unsigned m = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        const int v = integer(a[k], idx(t.sub(key), k));
        if (v < 1 || v > n) throw SchemaError(idx(t.sub(key), k), "index must be in 1..n");
        if (k > 0 && v <= a[k - 1].get<int>()) throw SchemaError(t.sub(key), "indices must increase");
        m |= 1u << (v - 1);
      }
      return static_cast<BidegreeForm::Mask>(m);
    };
    const auto hol = mask("hol", p);
    const auto anti = mask("antihol", q);
    const cplx c = complex_of(t.at("coeff"), t.sub("coeff"));
    t.finish();
    out.add(hol, anti, c);
  }
  o.finish();
  return out;
}

FactorSpec factor_of(const json& j, const std::string& path) {
  Obj o(j, path);
  FactorSpec f;
  f.phi = qpsh_of(o.at("phi"), o.sub("phi"));
  const int n = f.phi.dim();
  f.theta = o.has("theta") ? form11_of(o.at("theta"), o.sub("theta")) : ClosedOneOneForm::zero(n);
  f.eta = o.has("eta") ? form11_of(o.at("eta"), o.sub("eta")) : ClosedOneOneForm::zero(n);
  f.m = o.has("m") ? integer(o.at("m"), o.sub("m")) : 1;
  if (const json* c = o.opt("cutoff")) f.smoother = Smoother(cutoff_of(*c, o.sub("cutoff")));
  o.finish();
  guarded(path, [&] {
    f.validate();
    return 0;
  });
  return f;
}

InlineProduct product_of(const json& j, const std::string& path) {
  Obj o(j, path);
  InlineProduct p;
  const json& fs = arr(o.at("factors"), o.sub("factors"));
  if (fs.empty()) throw SchemaError(o.sub("factors"), "product needs at least one factor");
  for (std::size_t i = 0; i < fs.size(); ++i) p.spec.factors.push_back(factor_of(fs[i], idx(o.sub("factors"), i)));
  guarded(o.sub("factors"), [&] {
    p.spec.validate();
    return 0;
  });
  p.psi = test_function_of(o.at("test_function"), o.sub("test_function"));
  p.domain = domain_of(o.at("domain"), o.sub("domain"));
  if (const json* v = o.opt("oracle")) p.oracle = num(*v, o.sub("oracle"));
  o.finish();
  guarded(path, [&] {
    check_support(p.psi, p.domain);
    if (p.spec.dim() != domain_dim(p.domain)) throw InputError("product and domain dimensions differ");
    return 0;
  });
  return p;
}

ResidueFactorSpec residue_factor_of(const json& j, const std::string& path) {
  Obj o(j, path);
  ResidueFactorSpec r;
  r.c = o.has("c") ? num(o.at("c"), o.sub("c")) : 1.0;
  if (!(r.c > 0.0)) throw SchemaError(o.sub("c"), "c must be positive");
  r.f = poly_of(o.at("f"), o.sub("f"));
  r.v = o.has("v") ? potential_of(o.at("v"), o.sub("v")) : SmoothPotential::zero(r.f.dim());
  if (const json* m = o.opt("mode")) {
    const std::string s = str(*m, o.sub("mode"));
    if (s == "residue") {
      r.mode = ResidueMode::residue;
    } else if (s == "principal_value") {
      r.mode = ResidueMode::principal_value;
    } else {
      throw SchemaError(o.sub("mode"), "mode must be 'residue' or 'principal_value'");
    }
  }
  if (const json* c = o.opt("cutoff")) r.cutoff = cutoff_of(*c, o.sub("cutoff"));
  o.finish();
  guarded(path, [&] {
    r.validate();
    return 0;
  });
  return r;
}

InlineResidue residue_of(const json& j, const std::string& path) {
  Obj o(j, path);
  InlineResidue r;
  const json& fs = arr(o.at("factors"), o.sub("factors"));
  if (fs.empty()) throw SchemaError(o.sub("factors"), "residue needs at least one factor");
  for (std::size_t i = 0; i < fs.size(); ++i) r.factors.push_back(residue_factor_of(fs[i], idx(o.sub("factors"), i)));
  r.theta = form_of(o.at("theta"), o.sub("theta"));
  r.psi = test_function_of(o.at("test_function"), o.sub("test_function"));
  r.domain = domain_of(o.at("domain"), o.sub("domain"));
  if (const json* v = o.opt("oracle")) r.oracle = num(*v, o.sub("oracle"));
  o.finish();
  guarded(path, [&] {
    check_support(r.psi, r.domain);
    return 0;
  });
  return r;
}

std::vector<double> nus_of(const json& j, const std::string& path) {
  if (j.is_array()) return doubles(j, path);
  Obj o(j, path);
  const double start = num(o.at("start"), o.sub("start"));
  const double stop = num(o.at("stop"), o.sub("stop"));
  const double step = o.has("step") ? num(o.at("step"), o.sub("step")) : 1.0;
  o.finish();
  if (!(step > 0.0)) throw SchemaError(o.sub("step"), "step must be positive");
  if (stop < start) throw SchemaError(o.sub("stop"), "stop must not be below start");
  std::vector<double> out;
  const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw SchemaError(path, "nu range too long");
  for (long long i = 0; i < count; ++i) out.push_back(start + step * static_cast<double>(i));
  return out;
}

Mode mode_of(const json& j, const std::string& path) {
  const std::string s = str(j, path);
  if (s == "pair") return Mode::pair;
  if (s == "converge") return Mode::converge;
  if (s == "verify") return Mode::verify;
  if (s == "oracle") return Mode::oracle;
  if (s == "residue") return Mode::residue;
  throw SchemaError(path, "unknown mode '" + s + "'");
}

}  // namespace

json to_json(const HoloPolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) {
    terms.push_back({{"exp", exps_json(t.exponents, p.dim())}, {"coeff", complex_json(t.coeff)}});
  }
  return {{"n", p.dim()}, {"terms", terms}};
}

json to_json(const SmoothPotential& v) {
  switch (v.kind()) {
    case SmoothPotential::Kind::constant:
      return {{"kind", "constant"}, {"n", v.dim()}, {"value", v.constant_value()}};
    case SmoothPotential::Kind::combination: {
      json terms = json::array();
      for (const auto& [w, e] : v.children()) terms.push_back({{"weight", w}, {"expr", to_json(e)}});
      return {{"kind", "combination"}, {"n", v.dim()}, {"terms", terms}};
    }
    case SmoothPotential::Kind::real_poly: {
      json terms = json::array();
      for (const auto& t : v.poly_terms()) {
        terms.push_back({{"z", exps_json(t.z, v.dim())}, {"zbar", exps_json(t.zbar, v.dim())},
                         {"coeff", complex_json(t.coeff)}});
      }
      return {{"kind", "real_poly"}, {"n", v.dim()}, {"terms", terms}};
    }
    case SmoothPotential::Kind::log_one_plus: {
      json polys = json::array();
      for (const auto& p : v.log_polys()) polys.push_back(to_json(p));
      return {{"kind", "log_one_plus"}, {"polys", polys}};
    }
  }
  return {};
}

json to_json(const QpshFunction& phi) {
  json f = json::array();
  for (const auto& p : phi.f().components()) f.push_back(to_json(p));
  return {{"c", phi.c()}, {"f", f}, {"v", to_json(phi.v())}};
}

json to_json(const ClosedOneOneForm& f) {
  if (f.kind() == ClosedOneOneForm::Kind::ddc_potential) return {{"kind", "ddc"}, {"potential", to_json(f.potential())}};
  json rows = json::array();
  for (int p = 0; p < f.dim(); ++p) {
    json row = json::array();
    for (int q = 0; q < f.dim(); ++q) row.push_back(complex_json(f.matrix()(p, q)));
    rows.push_back(row);
  }
  return {{"kind", "constant"}, {"matrix", rows}};
}

json to_json(const Cutoff& c) {
  return {{"a", c.a()}, {"b", c.b()}, {"profile", c.profile() == CutoffProfile::quintic ? "quintic" : "exponential"}};
}

json to_json(const TestFunction& t) {
  if (t.is_unit()) return {{"unit", t.dim()}};
  json radii = json::array();
  for (const auto& r : t.radii()) radii.push_back(r ? json(*r) : json(nullptr));
  return {{"center", point_json(t.center())}, {"radii", radii}};
}

json to_json(const Domain& d) {
  if (const auto* b = std::get_if<Box>(&d)) {
    return {{"kind", "box"}, {"center", point_json(b->center)}, {"half_widths", b->half_widths}};
  }
  const auto& p = std::get<Polydisc>(d);
  return {{"kind", "polydisc"}, {"center", point_json(p.center)}, {"radii", p.radii}, {"log_r_min", p.log_r_min}};
}

json to_json(const PathSchedule& s) {
  if (s.kind() == PathSchedule::Kind::polynomial) {
    return {{"kind", "polynomial"}, {"exponents", s.exponents()}, {"scales", s.scales()}};
  }
  return {{"kind", "table"}, {"nus", s.table_nus()}, {"rows", s.table_rows()}};
}

json to_json(const QuadratureSettings& s) {
  return {{"order", s.order},         {"max_depth", s.max_depth},       {"rel_tol", s.rel_tol},
          {"abs_tol", s.abs_tol},     {"shell_refine", s.shell_refine}, {"max_evals", s.max_evals},
          {"workers", s.workers}};
}

json to_json(const BidegreeForm& f) {
  json terms = json::array();
  auto indices = [&](BidegreeForm::Mask m) {
    json a = json::array();
    for (int k = 0; k < f.dim(); ++k) {
      if (m & (1u << k)) a.push_back(k + 1);
    }
    return a;
  };
  for (const auto& t : f.terms()) {
    terms.push_back({{"hol", indices(t.hol)}, {"antihol", indices(t.antihol)}, {"coeff", complex_json(t.coeff)}});
  }
  return {{"n", f.dim()}, {"p", f.p()}, {"q", f.q()}, {"terms", terms}};
}

namespace {

json factor_json(const FactorSpec& f) {
  return {{"phi", to_json(f.phi)},
          {"theta", to_json(f.theta)},
          {"eta", to_json(f.eta)},
          {"m", f.m},
          {"cutoff", to_json(f.smoother.cutoff())}};
}

json residue_factor_json(const ResidueFactorSpec& r) {
  return {{"c", r.c},
          {"f", to_json(r.f)},
          {"v", to_json(r.v)},
          {"mode", r.mode == ResidueMode::residue ? "residue" : "principal_value"},
          {"cutoff", to_json(r.cutoff)}};
}

}  // namespace

RunConfig config_from_json(const json& j) {
  Obj o(j, "");
  RunConfig c;
  if (const json* v = o.opt("schema_version")) {
    c.schema_version = integer(*v, "schema_version");
    if (c.schema_version != 1) throw SchemaError("schema_version", "unsupported schema version");
  }
  c.mode = mode_of(o.at("mode"), "mode");
  if (const json* v = o.opt("scenario")) c.scenario = str(*v, "scenario");
  if (const json* v = o.opt("scenario_options")) {
    Obj so(*v, "scenario_options");
    if (const json* a = so.opt("a")) c.scenario_options.a = integer(*a, "scenario_options.a");
    so.finish();
  }
  if (const json* v = o.opt("product")) c.product = product_of(*v, "product");
  if (const json* v = o.opt("residue")) c.residue = residue_of(*v, "residue");
  if (const json* v = o.opt("schedule")) c.schedule = schedule_of(*v, "schedule");
  if (const json* v = o.opt("nu")) c.nus = nus_of(*v, "nu");
  if (const json* v = o.opt("js")) c.js = doubles(*v, "js");
  if (const json* v = o.opt("quadrature")) c.quadrature = quadrature_of(*v, "quadrature");
  if (const json* v = o.opt("output")) {
    Obj out(*v, "output");
    if (const json* p = out.opt("csv")) c.csv_path = str(*p, "output.csv");
    if (const json* p = out.opt("json")) c.json_path = str(*p, "output.json");
    out.finish();
  }
  if (const json* v = o.opt("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw SchemaError("seed", "expected a nonnegative integer");
    }
    c.seed = v->get<std::uint64_t>();
  }
  o.finish();

  // Cross-field checks.
  const int sources = (c.scenario ? 1 : 0) + (c.product ? 1 : 0) + (c.residue ? 1 : 0);
  if (c.mode != Mode::verify) {
    if (sources != 1) throw SchemaError("scenario", "exactly one of scenario, product, residue is required");
    if (c.product && c.mode == Mode::residue) throw SchemaError("product", "residue mode needs a residue object");
    if (c.residue && c.mode != Mode::residue && c.mode != Mode::oracle) {
      throw SchemaError("residue", "a residue object needs residue mode");
    }
    Scenario s;
    try {
      s = resolve_scenario(c);
    } catch (const LookupError& e) {
      throw SchemaError("scenario", e.what());
    } catch (const InputError& e) {
      throw SchemaError(c.scenario ? "scenario_options" : "scenario", e.what());
    }
    if (c.mode == Mode::residue && s.kind != ScenarioKind::residue) {
      throw SchemaError("mode", "residue mode needs a residue scenario");
    }
    const int r = s.arity();
    if (c.schedule && c.schedule->rank() != r) {
      throw SchemaError("schedule", "arity " + std::to_string(c.schedule->rank()) + " does not match scenario arity " +
                                        std::to_string(r));
    }
    if (!c.js.empty() && static_cast<int>(c.js.size()) != r) {
      throw SchemaError("js", "arity " + std::to_string(c.js.size()) + " does not match scenario arity " +
                                  std::to_string(r));
    }
    if (c.mode == Mode::pair && c.js.empty() && c.nus.size() != 1) {
      throw SchemaError("js", "pair mode needs js or a single nu");
    }
    if (!c.js.empty() && !c.nus.empty()) throw SchemaError("js", "give either js or nu, not both");
    // Residue mode is a single row with js or one nu, else a table like converge.
    const bool table = c.mode == Mode::converge || (c.mode == Mode::residue && c.js.empty());
    if (table && c.nus.empty() && !c.scenario) throw SchemaError("nu", "a nu range is required");
    if (table && !c.schedule && !c.scenario) throw SchemaError("schedule", "a schedule is required");
  } else if (sources != 0) {
    throw SchemaError("scenario", "verify mode takes no scenario");
  }
  return c;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["mode"] = to_string(c.mode);
  if (c.scenario) j["scenario"] = *c.scenario;
  if (c.scenario_options != ScenarioOptions{}) j["scenario_options"] = {{"a", c.scenario_options.a}};
  if (c.product) {
    json fs = json::array();
    for (const auto& f : c.product->spec.factors) fs.push_back(factor_json(f));
    json p = {{"factors", fs}, {"test_function", to_json(c.product->psi)}, {"domain", to_json(c.product->domain)}};
    if (c.product->oracle) p["oracle"] = *c.product->oracle;
    j["product"] = p;
  }
  if (c.residue) {
    json fs = json::array();
    for (const auto& f : c.residue->factors) fs.push_back(residue_factor_json(f));
    json r = {{"factors", fs},
              {"theta", to_json(c.residue->theta)},
              {"test_function", to_json(c.residue->psi)},
              {"domain", to_json(c.residue->domain)}};
    if (c.residue->oracle) r["oracle"] = *c.residue->oracle;
    j["residue"] = r;
  }
  if (c.schedule) j["schedule"] = to_json(*c.schedule);
  if (!c.nus.empty()) j["nu"] = c.nus;
  if (!c.js.empty()) j["js"] = c.js;
  j["quadrature"] = to_json(c.quadrature);
  if (!c.csv_path.empty() || !c.json_path.empty()) {
    json out = json::object();
    if (!c.csv_path.empty()) out["csv"] = c.csv_path;
    if (!c.json_path.empty()) out["json"] = c.json_path;
    j["output"] = out;
  }
  j["seed"] = c.seed;
  return j;
}

std::string serialize_config(const RunConfig& c) { return config_to_json(c).dump(2); }

Scenario resolve_scenario(const RunConfig& c) {
  if (c.scenario) return make_scenario(*c.scenario, c.scenario_options);
  Scenario s;
  if (c.product) {
    s.name = "inline_product";
    s.kind = ScenarioKind::product;
    s.product = c.product->spec;
    s.psi = c.product->psi;
    s.domain = c.product->domain;
    s.oracle = {c.product->oracle.value_or(std::nan("")), 0.0, c.product->oracle ? "user supplied" : "none"};
  } else if (c.residue) {
    s.name = "inline_residue";
    s.kind = ScenarioKind::residue;
    s.residue = c.residue->factors;
    s.residue_theta = c.residue->theta;
    s.psi = c.residue->psi;
    s.domain = c.residue->domain;
    s.oracle = {c.residue->oracle.value_or(std::nan("")), 0.0, c.residue->oracle ? "user supplied" : "none"};
  } else {
    throw InputError("config names no scenario");
  }
  const int r = s.arity();
  std::vector<int> e(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) e[static_cast<std::size_t>(k)] = r - k;
  s.schedule = PathSchedule::polynomial(e);
  return s;
}

}  // namespace malab
