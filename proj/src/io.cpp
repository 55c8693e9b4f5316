#include "approach/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "approach/errors.hpp"

namespace approach {
namespace {

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing field '" + key + "'", path + "." + key);
  return *it;
}

int get_int(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ConfigError("expected an integer", path + "." + key);
  return v.get<int>();
}

double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("expected a number", path);
  return v.get<double>();
}

double get_double(const Json& j, const std::string& key, const std::string& path) {
  return as_double(require(j, key, path), path + "." + key);
}

const Json& array_of(const Json& v, std::size_t n, const std::string& path) {
  if (!v.is_array()) throw ConfigError("expected an array", path);
  if (n != 0 && v.size() != n)
    throw ConfigError("expected " + std::to_string(n) + " entries, found " +
                          std::to_string(v.size()),
                      path);
  return v;
}

Eigen::VectorXd get_vector(const Json& v, const std::string& path, std::size_t n = 0) {
  array_of(v, n, path);
  if (v.empty()) throw ConfigError("vector is empty", path);
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = as_double(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

std::string idx(const std::string& path, std::initializer_list<int> ids) {
  std::string p = path;
  for (int i : ids) p += "[" + std::to_string(i) + "]";
  return p;
}

NoiseLaw noise_from_json(const Json& j) {
  auto it = j.find("noise");
  if (it == j.end() || it->is_null()) return {};
  return NoiseLaw{get_double(*it, "level", "noise")};
}

// Prefixes the field of validation errors from model constructors with the JSON path.
template <class F>
auto rethrow_with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), e.field().empty() ? field : field + "." + e.field());
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file '" + path + "'", path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), path);
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file '" + path + "'", path);
  out << text;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json model_to_json(const TabularVMDP& m) {
  const int S = m.num_states(), A = m.num_actions(), H = m.horizon();
  Json P = Json::array(), r = Json::array();
  for (int h = 0; h < H; ++h) {
    Json Ph = Json::array(), rh = Json::array();
    for (int s = 0; s < S; ++s) {
      Json Ps = Json::array(), rs = Json::array();
      for (int a = 0; a < A; ++a) {
        const auto row = m.transition(h, s, a);
        Ps.push_back(Json(std::vector<double>(row.begin(), row.end())));
        rs.push_back(vector_to_json(m.mean_return(h, s, a)));
      }
      Ph.push_back(std::move(Ps));
      rh.push_back(std::move(rs));
    }
    P.push_back(std::move(Ph));
    r.push_back(std::move(rh));
  }
  return Json{{"S", S},          {"A", A}, {"H", H}, {"d", m.reward_dim()},
              {"s1", m.initial_state() + 1}, {"P", std::move(P)}, {"r", std::move(r)},
              {"noise", {{"level", m.noise().level}}}};
}

TabularVMDP model_from_json(const Json& j) {
  const int S = get_int(j, "S", "model"), A = get_int(j, "A", "model");
  const int H = get_int(j, "H", "model"), d = get_int(j, "d", "model");
  const int s1 = get_int(j, "s1", "model");
  if (S < 1 || A < 1 || H < 1 || d < 1) throw ConfigError("sizes must be positive", "model.S");
  if (s1 < 1 || s1 > S) throw ConfigError("s1 must lie in [1, S]", "model.s1");
  std::vector<double> P(static_cast<std::size_t>(H) * S * A * S);
  Eigen::MatrixXd r(d, H * S * A);
  const Json& jP = array_of(require(j, "P", "model"), H, "model.P");
  const Json& jr = array_of(require(j, "r", "model"), H, "model.r");
  for (int h = 0; h < H; ++h) {
    array_of(jP[h], S, idx("model.P", {h}));
    array_of(jr[h], S, idx("model.r", {h}));
    for (int s = 0; s < S; ++s) {
      array_of(jP[h][s], A, idx("model.P", {h, s}));
      array_of(jr[h][s], A, idx("model.r", {h, s}));
      for (int a = 0; a < A; ++a) {
        const int i = (h * S + s) * A + a;
        const Eigen::VectorXd row = get_vector(jP[h][s][a], idx("model.P", {h, s, a}), S);
        for (int sp = 0; sp < S; ++sp) P[static_cast<std::size_t>(i) * S + sp] = row[sp];
        r.col(i) = get_vector(jr[h][s][a], idx("model.r", {h, s, a}), d);
      }
    }
  }
  const NoiseLaw noise = noise_from_json(j);
  return rethrow_with_field("model", [&] {
    return TabularVMDP(S, A, H, d, s1 - 1, std::move(P), std::move(r), noise);
  });
}

Json game_to_json(const TabularVMG& g) {
  const TabularVMDP& m = g.joint();
  const int S = g.num_states(), A = g.min_actions(), B = g.max_actions(), H = g.horizon();
  Json P = Json::array(), r = Json::array();
  for (int h = 0; h < H; ++h) {
    Json Ph = Json::array(), rh = Json::array();
    for (int s = 0; s < S; ++s) {
      Json Ps = Json::array(), rs = Json::array();
      for (int a = 0; a < A; ++a) {
        Json Pa = Json::array(), ra = Json::array();
        for (int b = 0; b < B; ++b) {
          const auto row = m.transition(h, s, g.joint_action(a, b));
          Pa.push_back(Json(std::vector<double>(row.begin(), row.end())));
          ra.push_back(vector_to_json(m.mean_return(h, s, g.joint_action(a, b))));
        }
        Ps.push_back(std::move(Pa));
        rs.push_back(std::move(ra));
      }
      Ph.push_back(std::move(Ps));
      rh.push_back(std::move(rs));
    }
    P.push_back(std::move(Ph));
    r.push_back(std::move(rh));
  }
  return Json{{"S", S},
              {"A", A},
              {"B", B},
              {"H", H},
              {"d", g.reward_dim()},
              {"s1", g.initial_state() + 1},
              {"P", std::move(P)},
              {"r", std::move(r)},
              {"noise", {{"level", m.noise().level}}}};
}

TabularVMG game_from_json(const Json& j) {
  const int S = get_int(j, "S", "game"), A = get_int(j, "A", "game"), B = get_int(j, "B", "game");
  const int H = get_int(j, "H", "game"), d = get_int(j, "d", "game");
  const int s1 = get_int(j, "s1", "game");
  if (S < 1 || A < 1 || B < 1 || H < 1 || d < 1)
    throw ConfigError("sizes must be positive", "game.S");
  if (s1 < 1 || s1 > S) throw ConfigError("s1 must lie in [1, S]", "game.s1");
  const int AB = A * B;
  std::vector<double> P(static_cast<std::size_t>(H) * S * AB * S);
  Eigen::MatrixXd r(d, H * S * AB);
  const Json& jP = array_of(require(j, "P", "game"), H, "game.P");
  const Json& jr = array_of(require(j, "r", "game"), H, "game.r");
  for (int h = 0; h < H; ++h) {
    array_of(jP[h], S, idx("game.P", {h}));
    array_of(jr[h], S, idx("game.r", {h}));
    for (int s = 0; s < S; ++s) {
      array_of(jP[h][s], A, idx("game.P", {h, s}));
      array_of(jr[h][s], A, idx("game.r", {h, s}));
      for (int a = 0; a < A; ++a) {
        array_of(jP[h][s][a], B, idx("game.P", {h, s, a}));
        array_of(jr[h][s][a], B, idx("game.r", {h, s, a}));
        for (int b = 0; b < B; ++b) {
          const int i = (h * S + s) * AB + a * B + b;
          const Eigen::VectorXd row = get_vector(jP[h][s][a][b], idx("game.P", {h, s, a, b}), S);
          for (int sp = 0; sp < S; ++sp) P[static_cast<std::size_t>(i) * S + sp] = row[sp];
          r.col(i) = get_vector(jr[h][s][a][b], idx("game.r", {h, s, a, b}), d);
        }
      }
    }
  }
  const NoiseLaw noise = noise_from_json(j);
  return rethrow_with_field("game", [&] {
    return TabularVMG(TabularVMDP(S, AB, H, d, s1 - 1, std::move(P), std::move(r), noise), A, B);
  });
}

Json linear_to_json(const LinearVMDP& m) {
  const int S = m.num_states(), A = m.num_actions(), H = m.horizon(), dl = m.feature_dim();
  Json phi = Json::array(), mu = Json::array(), W = Json::array();
  for (int s = 0; s < S; ++s) {
    Json ps = Json::array();
    for (int a = 0; a < A; ++a) ps.push_back(vector_to_json(m.phi(s, a)));
    phi.push_back(std::move(ps));
  }
  for (int h = 0; h < H; ++h) {
    Json mh = Json::array(), wh = Json::array();
    for (int s = 0; s < S; ++s) mh.push_back(vector_to_json(m.mu()[h].row(s).transpose()));
    for (int i = 0; i < m.reward_dim(); ++i) wh.push_back(vector_to_json(m.W()[h].row(i).transpose()));
    mu.push_back(std::move(mh));
    W.push_back(std::move(wh));
  }
  return Json{{"S", S},
              {"A", A},
              {"H", H},
              {"d", m.reward_dim()},
              {"d_lin", dl},
              {"s1", m.tabular().initial_state() + 1},
              {"phi", std::move(phi)},
              {"mu", std::move(mu)},
              {"W", std::move(W)},
              {"noise", {{"level", m.tabular().noise().level}}}};
}

LinearVMDP linear_from_json(const Json& j) {
  const std::string p = "linear";
  const int S = get_int(j, "S", p), A = get_int(j, "A", p), H = get_int(j, "H", p);
  const int d = get_int(j, "d", p), dl = get_int(j, "d_lin", p), s1 = get_int(j, "s1", p);
  if (S < 1 || A < 1 || H < 1 || d < 1 || dl < 1) throw ConfigError("sizes must be positive", p + ".S");
  if (s1 < 1 || s1 > S) throw ConfigError("s1 must lie in [1, S]", p + ".s1");
  Eigen::MatrixXd phi(S * A, dl);
  const Json& jphi = array_of(require(j, "phi", p), S, p + ".phi");
  for (int s = 0; s < S; ++s) {
    array_of(jphi[s], A, idx(p + ".phi", {s}));
    for (int a = 0; a < A; ++a)
      phi.row(s * A + a) = get_vector(jphi[s][a], idx(p + ".phi", {s, a}), dl).transpose();
  }
  std::vector<Eigen::MatrixXd> mu, W;
  const Json& jmu = array_of(require(j, "mu", p), H, p + ".mu");
  const Json& jW = array_of(require(j, "W", p), H, p + ".W");
  for (int h = 0; h < H; ++h) {
    Eigen::MatrixXd m(S, dl), w(d, dl);
    array_of(jmu[h], S, idx(p + ".mu", {h}));
    array_of(jW[h], d, idx(p + ".W", {h}));
    for (int s = 0; s < S; ++s) m.row(s) = get_vector(jmu[h][s], idx(p + ".mu", {h, s}), dl).transpose();
    for (int i = 0; i < d; ++i) w.row(i) = get_vector(jW[h][i], idx(p + ".W", {h, i}), dl).transpose();
    mu.push_back(std::move(m));
    W.push_back(std::move(w));
  }
  const NoiseLaw noise = noise_from_json(j);
  return rethrow_with_field(p, [&] {
    return LinearVMDP(S, A, H, s1 - 1, std::move(phi), std::move(mu), std::move(W), noise);
  });
}

Json set_to_json(const ConvexSet& set) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"type", "ball"}, {"center", vector_to_json(s.center)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, Box>) {
          return {{"type", "box"}, {"lower", vector_to_json(s.lower)}, {"upper", vector_to_json(s.upper)}};
        } else if constexpr (std::is_same_v<T, HullOfPoints>) {
          Json v = Json::array();
          for (const auto& x : s.vertices) v.push_back(vector_to_json(x));
          return {{"type", "hull"}, {"vertices", std::move(v)}};
        } else if constexpr (std::is_same_v<T, HalfspaceCap>) {
          return {{"type", "cap"},
                  {"center", vector_to_json(s.center)},
                  {"radius", s.radius},
                  {"normal", vector_to_json(s.normal)},
                  {"offset", s.offset}};
        } else {
          return {{"type", "augmented"},
                  {"base", set_to_json(*s.base)},
                  {"lower", s.lower},
                  {"upper", s.upper}};
        }
      },
      set.shape());
}

ConvexSet set_from_json(const Json& j, const std::string& path) {
  const Json& t = require(j, "type", path);
  if (!t.is_string()) throw ConfigError("set type must be a string", path + ".type");
  const std::string type = t.get<std::string>();
  // Shape validation reports fields relative to the set; prefix them with its path.
  auto build = [&](ConvexSet::Shape shape, const std::string& field) {
    try {
      return ConvexSet(std::move(shape));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), path + "." + (e.field().empty() ? field : e.field()));
    }
  };
  if (type == "ball") {
    return build(Ball{get_vector(require(j, "center", path), path + ".center"),
                      get_double(j, "radius", path)},
                 "radius");
  }
  if (type == "box") {
    return build(Box{get_vector(require(j, "lower", path), path + ".lower"),
                     get_vector(require(j, "upper", path), path + ".upper")},
                 "lower");
  }
  if (type == "hull") {
    const Json& jv = require(j, "vertices", path);
    array_of(jv, 0, path + ".vertices");
    HullOfPoints hull;
    for (std::size_t i = 0; i < jv.size(); ++i)
      hull.vertices.push_back(get_vector(jv[i], path + ".vertices[" + std::to_string(i) + "]"));
    return build(std::move(hull), "vertices");
  }
  if (type == "cap") {
    return build(HalfspaceCap{get_vector(require(j, "center", path), path + ".center"),
                              get_double(j, "radius", path),
                              get_vector(require(j, "normal", path), path + ".normal"),
                              get_double(j, "offset", path)},
                 "offset");
  }
  if (type == "augmented") {
    const ConvexSet base = set_from_json(require(j, "base", path), path + ".base");
    const double lower = get_double(j, "lower", path), upper = get_double(j, "upper", path);
    try {
      return augment_set(base, lower, upper);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), path + ".upper");
    }
  }
  throw ConfigError("unknown set type '" + type + "'", path + ".type");
}

Json cost_to_json(const TabularVMDP& m, const std::vector<double>& cost) {
  Json c = Json::array();
  for (int h = 0; h < m.horizon(); ++h) {
    Json ch = Json::array();
    for (int s = 0; s < m.num_states(); ++s) {
      Json cs = Json::array();
      for (int a = 0; a < m.num_actions(); ++a) cs.push_back(cost[m.sa_index(h, s, a)]);
      ch.push_back(std::move(cs));
    }
    c.push_back(std::move(ch));
  }
  return c;
}

std::vector<double> cost_from_json(const Json& j, const TabularVMDP& m, const std::string& path) {
  const int S = m.num_states(), A = m.num_actions(), H = m.horizon();
  std::vector<double> c(static_cast<std::size_t>(m.num_sa()));
  array_of(j, H, path);
  for (int h = 0; h < H; ++h) {
    array_of(j[h], S, idx(path, {h}));
    for (int s = 0; s < S; ++s) {
      const Eigen::VectorXd row = get_vector(j[h][s], idx(path, {h, s}), A);
      for (int a = 0; a < A; ++a) {
        if (!(std::abs(row[a]) <= 1.0))
          throw ConfigError("cost must lie in [-1, 1]", idx(path, {h, s, a}));
        c[m.sa_index(h, s, a)] = row[a];
      }
    }
  }
  return c;
}

Json empirical_to_json(const EmpiricalModel& e) {
  const int S = e.num_states(), A = e.num_actions(), H = e.horizon();
  Json tc = Json::array(), rs = Json::array(), snap = e.has_snapshot() ? Json::array() : Json();
  for (int h = 0; h < H; ++h) {
    Json th = Json::array(), rh = Json::array(), sh = Json::array();
    for (int s = 0; s < S; ++s) {
      Json ts = Json::array(), rss = Json::array(), ss = Json::array();
      for (int a = 0; a < A; ++a) {
        Json row = Json::array(), srow = Json::array();
        for (int sp = 0; sp < S; ++sp) {
          row.push_back(e.transition_count(h, s, a, sp));
          if (e.has_snapshot())
            srow.push_back(e.snapshot()[static_cast<std::size_t>(e.sa_index(h, s, a)) * S + sp]);
        }
        ts.push_back(std::move(row));
        ss.push_back(std::move(srow));
        rss.push_back(vector_to_json(e.return_sums().col(e.sa_index(h, s, a))));
      }
      th.push_back(std::move(ts));
      rh.push_back(std::move(rss));
      sh.push_back(std::move(ss));
    }
    tc.push_back(std::move(th));
    rs.push_back(std::move(rh));
    if (e.has_snapshot()) snap.push_back(std::move(sh));
  }
  return Json{{"S", S},
              {"A", A},
              {"H", H},
              {"d", e.reward_dim()},
              {"s1", e.initial_state() + 1},
              {"transition_counts", std::move(tc)},
              {"return_sums", std::move(rs)},
              {"snapshot", std::move(snap)}};
}

EmpiricalModel empirical_from_json(const Json& j) {
  const std::string p = "empirical";
  const int S = get_int(j, "S", p), A = get_int(j, "A", p), H = get_int(j, "H", p);
  const int d = get_int(j, "d", p), s1 = get_int(j, "s1", p);
  if (S < 1 || A < 1 || H < 1 || d < 1) throw ConfigError("sizes must be positive", p + ".S");
  if (s1 < 1 || s1 > S) throw ConfigError("s1 must lie in [1, S]", p + ".s1");
  std::vector<std::int64_t> tc(static_cast<std::size_t>(H) * S * A * S);
  Eigen::MatrixXd rs(d, H * S * A);
  const Json& jsnap = require(j, "snapshot", p);
  std::vector<double> snap;
  if (!jsnap.is_null()) snap.resize(tc.size());
  const Json& jtc = array_of(require(j, "transition_counts", p), H, p + ".transition_counts");
  const Json& jrs = array_of(require(j, "return_sums", p), H, p + ".return_sums");
  if (!jsnap.is_null()) array_of(jsnap, H, p + ".snapshot");
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        const int i = (h * S + s) * A + a;
        const std::string tpath = idx(p + ".transition_counts", {h, s, a});
        const Json& row = jtc.at(h).at(s).at(a);
        array_of(row, S, tpath);
        for (int sp = 0; sp < S; ++sp) {
          if (!row[sp].is_number_integer()) throw ConfigError("expected an integer", tpath);
          tc[static_cast<std::size_t>(i) * S + sp] = row[sp].get<std::int64_t>();
        }
        rs.col(i) = get_vector(jrs.at(h).at(s).at(a), idx(p + ".return_sums", {h, s, a}), d);
        if (!jsnap.is_null()) {
          const Eigen::VectorXd srow =
              get_vector(jsnap.at(h).at(s).at(a), idx(p + ".snapshot", {h, s, a}), S);
          for (int sp = 0; sp < S; ++sp) snap[static_cast<std::size_t>(i) * S + sp] = srow[sp];
        }
      }
  return EmpiricalModel::restore(S, A, H, d, s1 - 1, std::move(tc), std::move(rs), std::move(snap));
}

Json policy_to_json(const Policy& pi) {
  Json out = Json::array();
  for (int h = 0; h < pi.horizon(); ++h) {
    Json ph = Json::array();
    for (int s = 0; s < pi.num_states(); ++s) {
      const auto dist = pi.distribution(h, s);
      ph.push_back(Json(std::vector<double>(dist.begin(), dist.end())));
    }
    out.push_back(std::move(ph));
  }
  return out;
}

Json mixture_to_json(const MixturePolicy& mix) {
  Json comps = Json::array();
  for (const Policy& p : mix.components) comps.push_back(policy_to_json(p));
  return Json{{"weights", mix.weights}, {"components", std::move(comps)}};
}

}  // namespace approach
