#include "incdual/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace incdual {

using json = nlohmann::json;

namespace {

// Location helper: the line of the first textual occurrence of the path's
// keys, searched in order.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}

  std::string where(const std::string& path) const {
    std::size_t pos = 0;
    bool found = false;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '/')) {
      if (part.empty() || std::isdigit(static_cast<unsigned char>(part[0]))) continue;
      const auto at = text_.find('"' + part + '"', pos);
      if (at == std::string::npos) break;
      pos = at;
      found = true;
    }
    std::string out = path.empty() ? "/" : path;
    if (found) out += " (line " + std::to_string(1 + std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n')) + ")";
    return out;
  }

 private:
  const std::string& text_;
};

struct Reader {
  const Locator& loc;

  [[noreturn]] void schema(const std::string& path, const std::string& msg) const {
    fail(ErrorCode::kSchema, loc.where(path) + ": " + msg);
  }
  [[noreturn]] void semantic(const std::string& path, const std::string& msg) const {
    fail(ErrorCode::kSemantic, loc.where(path) + ": " + msg);
  }

  const json& field(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) schema(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(path + "/" + key, "missing field");
    return *it;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) schema(path, "expected a number");
    return j.get<double>();
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) schema(path, "expected an integer");
    return j.get<int>();
  }

  Vector vector(const json& j, const std::string& path) const {
    if (j.is_number()) {
      Vector v(1);
      v(0) = j.get<double>();
      return v;
    }
    if (!j.is_array()) schema(path, "expected an array of numbers");
    Vector v(static_cast<long>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<long>(i)) = number(j[i], path + "/" + std::to_string(i));
    return v;
  }

  std::vector<Vector> vectors(const json& j, const std::string& path) const {
    if (!j.is_array()) schema(path, "expected an array");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector(j[i], path + "/" + std::to_string(i)));
    return out;
  }

  // Nested rows or a flat row-major list of rows * cols numbers.
  Matrix matrix(const json& j, const std::string& path, long rows, long cols) const {
    if (!j.is_array()) schema(path, "expected a matrix");
    Matrix m(rows, cols);
    const bool nested = !j.empty() && j[0].is_array();
    if (nested) {
      if (static_cast<long>(j.size()) != rows) semantic(path, "expected " + std::to_string(rows) + " rows");
      for (long i = 0; i < rows; ++i) {
        const Vector row = vector(j[i], path + "/" + std::to_string(i));
        if (row.size() != cols) semantic(path + "/" + std::to_string(i), "expected " + std::to_string(cols) + " columns");
        m.row(i) = row.transpose();
      }
    } else {
      const Vector flat = vector(j, path);
      if (flat.size() != rows * cols) {
        semantic(path, "expected " + std::to_string(rows * cols) + " entries (" + std::to_string(rows) + "x" +
                           std::to_string(cols) + ")");
      }
      for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) m(i, k) = flat(i * cols + k);
    }
    return m;
  }

  template <class F>
  auto guarded(const std::string& path, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchema || e.code() == ErrorCode::kSemantic) throw;
      semantic(path, e.what());
    }
  }

  ConvexSet set(const json& j, const std::string& path, int dim) const {
    const json& type = field(j, path, "type");
    if (!type.is_string()) schema(path + "/type", "expected a string");
    const std::string t = type.get<std::string>();
    auto check = [&](const Vector& v, const std::string& p) {
      if (v.size() != dim) semantic(p, "expected dimension " + std::to_string(dim));
      return v;
    };
    if (t == "box") {
      const Vector lo = check(vector(field(j, path, "lower"), path + "/lower"), path + "/lower");
      const Vector hi = check(vector(field(j, path, "upper"), path + "/upper"), path + "/upper");
      return guarded(path, [&] { return ConvexSet::box(lo, hi); });
    }
    if (t == "ball") {
      const Vector c = check(vector(field(j, path, "center"), path + "/center"), path + "/center");
      const double rad = number(field(j, path, "radius"), path + "/radius");
      return guarded(path, [&] { return ConvexSet::ball(c, rad); });
    }
    if (t == "polytope") {
      const auto vs = vectors(field(j, path, "vertices"), path + "/vertices");
      for (std::size_t i = 0; i < vs.size(); ++i) check(vs[i], path + "/vertices/" + std::to_string(i));
      return guarded(path, [&] { return ConvexSet::polytope(vs); });
    }
    if (t == "singleton") {
      const Vector pt = check(vector(field(j, path, "point"), path + "/point"), path + "/point");
      return guarded(path, [&] { return ConvexSet::singleton(pt); });
    }
    schema(path + "/type", "unknown set type '" + t + "'");
  }

  ConvexFn fn(const json& j, const std::string& path, int dim) const {
    const json& type = field(j, path, "type");
    if (!type.is_string()) schema(path + "/type", "expected a string");
    const std::string t = type.get<std::string>();
    auto opt_vector = [&](const char* key) {
      auto it = j.find(key);
      if (it == j.end()) return Vector(Vector::Zero(dim));
      Vector v = vector(*it, path + "/" + key);
      if (v.size() != dim) semantic(path + "/" + key, "expected dimension " + std::to_string(dim));
      return v;
    };
    auto opt_number = [&](const char* key) {
      auto it = j.find(key);
      return it == j.end() ? 0.0 : number(*it, path + "/" + key);
    };
    if (t == "affine") {
      const Vector c = opt_vector("c");
      const double b = opt_number("b");
      return guarded(path, [&] { return ConvexFn::affine(c, b); });
    }
    if (t == "quadratic") {
      const Matrix P = matrix(field(j, path, "P"), path + "/P", dim, dim);
      const Vector c = opt_vector("c");
      const double b = opt_number("b");
      return guarded(path, [&] { return ConvexFn::quadratic(P, c, b); });
    }
    if (t == "coordinate") {
      const json& idx = field(j, path, "indices");
      if (!idx.is_array()) schema(path + "/indices", "expected an array of integers");
      std::vector<int> ids;
      for (std::size_t i = 0; i < idx.size(); ++i) ids.push_back(integer(idx[i], path + "/indices/" + std::to_string(i)));
      return guarded(path, [&] { return ConvexFn::coordinate_select(dim, ids); });
    }
    if (t == "norm1") return ConvexFn::norm1(dim);
    if (t == "norm2sq") return ConvexFn::norm2sq(dim);
    schema(path + "/type", "unknown function type '" + t + "'");
  }

  int positive(const json& obj, const char* key) const {
    const int v = integer(field(obj, "", key), std::string("/") + key);
    if (v <= 0) semantic(std::string("/") + key, "must be positive");
    return v;
  }

  SemilinearMap semilinear(const json& doc, int n, int r) const {
    const Matrix A0 = matrix(field(doc, "", "A0"), "/A0", n, n);
    const Matrix A1 = matrix(field(doc, "", "A1"), "/A1", n, n);
    const Matrix B = matrix(field(doc, "", "B"), "/B", n, r);
    const ConvexSet U = set(field(doc, "", "U"), "/U", r);
    return guarded("/", [&] { return SemilinearMap(A0, A1, B, U); });
  }

  TabulatedMap tabulated(const json& m, int n) const {
    const json& triples = field(m, "/map", "triples");
    if (!triples.is_array()) schema("/map/triples", "expected an array");
    std::vector<GraphTriple> out;
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const std::string p = "/map/triples/" + std::to_string(i);
      const json& t = triples[i];
      GraphTriple g;
      if (t.is_array()) {
        if (t.size() != 3) schema(p, "a triple has three entries");
        g = {vector(t[0], p + "/0"), vector(t[1], p + "/1"), vector(t[2], p + "/2")};
      } else {
        g = {vector(field(t, p, "x"), p + "/x"), vector(field(t, p, "y"), p + "/y"), vector(field(t, p, "z"), p + "/z")};
      }
      if (g.x.size() != n || g.y.size() != n || g.z.size() != n) semantic(p, "expected dimension " + std::to_string(n));
      out.push_back(std::move(g));
    }
    return guarded("/map", [&] { return TabulatedMap(std::move(out)); });
  }

  MeshSpec delta(const json& j, const std::string& path) const {
    double d;
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      const auto slash = s.find('/');
      try {
        d = slash == std::string::npos ? std::stod(s) : std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      } catch (const std::exception&) {
        schema(path, "expected a number or a fraction like \"1/8\"");
      }
    } else {
      d = number(j, path);
    }
    return guarded(path, [&] { return MeshSpec::from_delta(d); });
  }
};

json vec_json(const Vector& v) {
  json a = json::array();
  for (long i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat_json(const Matrix& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

json set_json(const ConvexSet& s) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConvexSet::Box>) {
          return {{"type", "box"}, {"lower", vec_json(d.lower)}, {"upper", vec_json(d.upper)}};
        } else if constexpr (std::is_same_v<T, ConvexSet::Ball>) {
          return {{"type", "ball"}, {"center", vec_json(d.center)}, {"radius", d.radius}};
        } else if constexpr (std::is_same_v<T, ConvexSet::Polytope>) {
          json vs = json::array();
          for (const auto& v : d.vertices) vs.push_back(vec_json(v));
          return {{"type", "polytope"}, {"vertices", vs}};
        } else {
          return {{"type", "singleton"}, {"point", vec_json(d.point)}};
        }
      },
      s.data());
}

json fn_json(const ConvexFn& f) {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ConvexFn::Affine>) {
          return {{"type", "affine"}, {"c", vec_json(d.c)}, {"b", d.b}};
        } else if constexpr (std::is_same_v<T, ConvexFn::Quadratic>) {
          return {{"type", "quadratic"}, {"P", mat_json(d.P)}, {"c", vec_json(d.c)}, {"b", d.b}};
        } else if constexpr (std::is_same_v<T, ConvexFn::CoordinateSelect>) {
          return {{"type", "coordinate"}, {"indices", d.indices}};
        } else if constexpr (std::is_same_v<T, ConvexFn::Norm1>) {
          return {{"type", "norm1"}};
        } else if constexpr (std::is_same_v<T, ConvexFn::Norm2Sq>) {
          return {{"type", "norm2sq"}};
        } else {
          fail(ErrorCode::kUnsupported, "only closed-form terminal costs can be written to a problem file");
        }
      },
      f.data());
}

void put_map(json& doc, const InclusionMap& map) {
  if (const auto* s = std::get_if<SemilinearMap>(&map)) {
    doc["A0"] = mat_json(s->A0);
    doc["A1"] = mat_json(s->A1);
    doc["B"] = mat_json(s->B);
    doc["U"] = set_json(s->U);
    return;
  }
  json triples = json::array();
  for (const auto& t : std::get<TabulatedMap>(map).triples) {
    triples.push_back({{"x", vec_json(t.x)}, {"y", vec_json(t.y)}, {"z", vec_json(t.z)}});
  }
  doc["map"] = {{"triples", triples}};
}

bool json_close(const json& a, const json& b, double tol) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>()) <= tol;
  if (a.type() != b.type()) return false;
  if (a.is_array()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!json_close(a[i], b[i], tol)) return false;
    return true;
  }
  if (a.is_object()) {
    if (a.size() != b.size()) return false;
    for (auto it = a.begin(); it != a.end(); ++it) {
      auto jt = b.find(it.key());
      if (jt == b.end() || !json_close(*it, *jt, tol)) return false;
    }
    return true;
  }
  return a == b;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParse, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  const json doc = parse_json(text);
  const Locator loc(text);
  const Reader rd{loc};
  if (!doc.is_object()) rd.schema("", "the document must be an object");
  const json& kind = rd.field(doc, "", "kind");
  if (!kind.is_string()) rd.schema("/kind", "expected \"discrete\" or \"continuous\"");

  ProblemFile pf;
  const int n = rd.positive(doc, "n");
  if (kind == "discrete") {
    pf.kind = ProblemKind::kDiscrete;
    const int N = rd.integer(rd.field(doc, "", "N"), "/N");
    if (N < 2) rd.semantic("/N", "horizon N must be at least 2");
    InclusionMap map = doc.contains("map") ? InclusionMap(rd.tabulated(doc["map"], n))
                                           : InclusionMap(rd.semilinear(doc, n, rd.positive(doc, "r")));
    const int r = doc.contains("map") ? 0 : doc["r"].get<int>();
    ConvexFn phi = rd.fn(rd.field(doc, "", "phi"), "/phi", 2 * n);
    ConvexSet Q0 = rd.set(rd.field(doc, "", "Q0"), "/Q0", n);
    ConvexSet Q1 = rd.set(rd.field(doc, "", "Q1"), "/Q1", n);
    pf.discrete.emplace(DiscreteProblem{n, r, N, std::move(map), std::move(phi), std::move(Q0), std::move(Q1)});
    rd.guarded("/", [&] { pf.discrete->validate(); });
  } else if (kind == "continuous") {
    pf.kind = ProblemKind::kContinuous;
    const int r = rd.positive(doc, "r");
    if (doc.contains("map")) rd.semantic("/map", "continuous problems need a semilinear map");
    SemilinearMap map = rd.semilinear(doc, n, r);
    ConvexFn phi = rd.fn(rd.field(doc, "", "phi"), "/phi", 2 * n);
    ConvexSet Q0 = rd.set(rd.field(doc, "", "Q0"), "/Q0", n);
    ConvexSet Q1 = rd.set(rd.field(doc, "", "Q1"), "/Q1", n);
    pf.continuous.emplace(ContinuousProblem{n, r, std::move(map), std::move(phi), std::move(Q0), std::move(Q1)});
    rd.guarded("/", [&] { pf.continuous->validate(); });
    if (auto it = doc.find("delta_list"); it != doc.end()) {
      if (!it->is_array()) rd.schema("/delta_list", "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        pf.delta_list.push_back(rd.delta((*it)[i], "/delta_list/" + std::to_string(i)));
      }
    }
    if (auto it = doc.find("reference"); it != doc.end()) pf.reference = rd.number(*it, "/reference");
  } else {
    rd.schema("/kind", "expected \"discrete\" or \"continuous\"");
  }
  return pf;
}

std::string emit(const ProblemFile& pf) {
  json doc;
  if (pf.kind == ProblemKind::kDiscrete) {
    const auto& p = pf.discrete.value();
    doc["kind"] = "discrete";
    doc["n"] = p.n;
    if (p.is_semilinear()) doc["r"] = p.r;
    doc["N"] = p.N;
    put_map(doc, p.map);
    doc["phi"] = fn_json(p.phi);
    doc["Q0"] = set_json(p.Q0);
    doc["Q1"] = set_json(p.Q1);
  } else {
    const auto& c = pf.continuous.value();
    doc["kind"] = "continuous";
    doc["n"] = c.n;
    doc["r"] = c.r;
    put_map(doc, c.map);
    doc["phi"] = fn_json(c.phi);
    doc["Q0"] = set_json(c.Q0);
    doc["Q1"] = set_json(c.Q1);
    json deltas = json::array();
    for (const auto& m : pf.delta_list) deltas.push_back("1/" + std::to_string(m.K()));
    doc["delta_list"] = deltas;
    if (pf.reference) doc["reference"] = *pf.reference;
  }
  return doc.dump(2) + "\n";
}

DualVariables parse_dual(const std::string& text, int n) {
  const json doc = parse_json(text);
  const Locator loc(text);
  const Reader rd{loc};
  DualVariables dv;
  dv.xstar = rd.vectors(rd.field(doc, "", "xstar"), "/xstar");
  dv.mustar = rd.vectors(rd.field(doc, "", "mustar"), "/mustar");
  for (std::size_t i = 0; i < dv.xstar.size(); ++i) {
    if (dv.xstar[i].size() != n) rd.semantic("/xstar/" + std::to_string(i), "expected dimension " + std::to_string(n));
  }
  for (std::size_t i = 0; i < dv.mustar.size(); ++i) {
    if (dv.mustar[i].size() != n) rd.semantic("/mustar/" + std::to_string(i), "expected dimension " + std::to_string(n));
  }
  return dv;
}

std::string emit_dual(const DualVariables& dv) {
  json doc;
  doc["xstar"] = json::array();
  for (const auto& v : dv.xstar) doc["xstar"].push_back(vec_json(v));
  doc["mustar"] = json::array();
  for (const auto& v : dv.mustar) doc["mustar"].push_back(vec_json(v));
  return doc.dump(2) + "\n";
}

Trajectory parse_primal(const DiscreteProblem& p, const std::string& text) {
  const json doc = parse_json(text);
  const Locator loc(text);
  const Reader rd{loc};
  const auto& F = p.semilinear();
  const Vector x0 = rd.vector(rd.field(doc, "", "x0"), "/x0");
  const Vector x1 = rd.vector(rd.field(doc, "", "x1"), "/x1");
  const auto controls = rd.vectors(rd.field(doc, "", "controls"), "/controls");
  return rd.guarded("/controls", [&] { return simulate(F, x0, x1, controls, 1e-8); });
}

std::vector<ConjugateQuery> parse_conjugate_queries(const std::string& text) {
  const json doc = parse_json(text);
  const Locator loc(text);
  const Reader rd{loc};
  std::vector<std::pair<const json*, std::string>> items;
  if (doc.is_object() && doc.contains("queries")) {
    const json& qs = doc["queries"];
    if (!qs.is_array()) rd.schema("/queries", "expected an array");
    for (std::size_t i = 0; i < qs.size(); ++i) items.emplace_back(&qs[i], "/queries/" + std::to_string(i));
  } else {
    items.emplace_back(&doc, "");
  }
  std::vector<ConjugateQuery> out;
  for (const auto& [q, path] : items) {
    ConjugateQuery cq;
    const json& op = rd.field(*q, path, "op");
    if (!op.is_string()) rd.schema(path + "/op", "expected a string");
    cq.op = op.get<std::string>();
    if (cq.op == "pascal") {
      cq.order = rd.integer(rd.field(*q, path, "order"), path + "/order");
      cq.delta = rd.number(rd.field(*q, path, "delta"), path + "/delta");
      const Vector in = rd.vector(rd.field(*q, path, "in"), path + "/in");
      cq.in.assign(in.data(), in.data() + in.size());
    } else if (cq.op == "conjugate" || cq.op == "value" || cq.op == "lift_conjugate") {
      const int dim = rd.integer(rd.field(*q, path, "dim"), path + "/dim");
      if (dim <= 0) rd.semantic(path + "/dim", "must be positive");
      cq.phi = rd.fn(rd.field(*q, path, "phi"), path + "/phi", dim);
      if (cq.op == "lift_conjugate") {
        if (dim % 2 != 0) rd.semantic(path + "/dim", "a lifted function needs an even dimension");
        cq.delta = rd.number(rd.field(*q, path, "delta"), path + "/delta");
        cq.xstar = rd.vector(rd.field(*q, path, "xstar"), path + "/xstar");
        cq.ystar = rd.vector(rd.field(*q, path, "ystar"), path + "/ystar");
        if (cq.xstar.size() != dim / 2 || cq.ystar.size() != dim / 2) {
          rd.semantic(path, "xstar and ystar need dimension " + std::to_string(dim / 2));
        }
      } else {
        cq.at = rd.vector(rd.field(*q, path, "at"), path + "/at");
        if (cq.at.size() != dim) rd.semantic(path + "/at", "expected dimension " + std::to_string(dim));
      }
    } else {
      rd.schema(path + "/op", "unknown op '" + cq.op + "'");
    }
    out.push_back(std::move(cq));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_problem(const DiscreteProblem& a, const DiscreteProblem& b, double tol) {
  json ja, jb;
  ja["n"] = a.n, ja["r"] = a.r, ja["N"] = a.N;
  jb["n"] = b.n, jb["r"] = b.r, jb["N"] = b.N;
  put_map(ja, a.map);
  put_map(jb, b.map);
  ja["phi"] = fn_json(a.phi), ja["Q0"] = set_json(a.Q0), ja["Q1"] = set_json(a.Q1);
  jb["phi"] = fn_json(b.phi), jb["Q0"] = set_json(b.Q0), jb["Q1"] = set_json(b.Q1);
  return json_close(ja, jb, tol);
}

bool same_problem(const ContinuousProblem& a, const ContinuousProblem& b, double tol) {
  json ja, jb;
  ja["n"] = a.n, ja["r"] = a.r;
  jb["n"] = b.n, jb["r"] = b.r;
  put_map(ja, a.map);
  put_map(jb, b.map);
  ja["phi"] = fn_json(a.phi), ja["Q0"] = set_json(a.Q0), ja["Q1"] = set_json(a.Q1);
  jb["phi"] = fn_json(b.phi), jb["Q0"] = set_json(b.Q0), jb["Q1"] = set_json(b.Q1);
  return json_close(ja, jb, tol);
}

}  // namespace incdual
