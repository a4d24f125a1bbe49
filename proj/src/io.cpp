#include "essclose/io.hpp"

#include <fstream>

namespace essclose {

json rat_to_json(const Rat& r) {
  if (r.is_integer() && abs(r) <= Rat(1LL << 53)) return json(static_cast<int64_t>(r.floor()));
  return json(r.str());
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<int64_t>());
  if (j.is_number_float()) return Rat::from_double(j.get<double>());
  if (j.is_string()) {
    try {
      return Rat::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      throw InputError(std::string("malformed rational: ") + e.what());
    }
  }
  throw InputError("malformed rational: expected number or \"num/den\" string");
}

namespace {

json ratvec_to_json(const RatVec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(rat_to_json(v[i]));
  return a;
}

RatVec ratvec_from_json(const json& j, int expect) {
  if (!j.is_array() || (expect >= 0 && static_cast<int>(j.size()) != expect))
    throw InputError("malformed vector: wrong arity");
  RatVec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = rat_from_json(j[static_cast<size_t>(i)]);
  return v;
}

json interval_to_json(const Interval& iv) {
  return json::array({rat_to_json(iv.lo), rat_to_json(iv.hi)});
}

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("malformed interval: expected [lo, hi]");
  return Interval(rat_from_json(j[0]), rat_from_json(j[1]));
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

json to_json(const TaggedPieceSet& S) {
  json pieces = json::array();
  for (const auto& piece : S.pieces) {
    json dirs = json::array();
    for (int c = 0; c < piece.p; ++c) dirs.push_back(ratvec_to_json(piece.dirs.col(c)));
    json box = json::array();
    for (const auto& iv : piece.box) box.push_back(interval_to_json(iv));
    pieces.push_back(json{{"p", piece.p},
                          {"anchor", ratvec_to_json(piece.anchor)},
                          {"dirs", dirs},
                          {"box", box},
                          {"tag", piece.tag == Tag::Full ? "Full" : "Null"}});
  }
  return json{{"k", S.k}, {"pieces", pieces}};
}

TaggedPieceSet piece_set_from_json(const json& j) {
  int k = require(j, "k").get<int>();
  TaggedPieceSet S(k);
  for (const auto& pj : require(j, "pieces")) {
    int p = require(pj, "p").get<int>();
    RatVec anchor = ratvec_from_json(require(pj, "anchor"), k);
    const json& dj = require(pj, "dirs");
    if (static_cast<int>(dj.size()) != p) throw InputError("piece: dirs arity != p");
    RatMat dirs(k, p);
    for (int c = 0; c < p; ++c) dirs.col(c) = ratvec_from_json(dj[static_cast<size_t>(c)], k);
    const json& bj = require(pj, "box");
    if (static_cast<int>(bj.size()) != p) throw InputError("piece: box arity != p");
    std::vector<Interval> box;
    for (int c = 0; c < p; ++c) box.push_back(interval_from_json(bj[static_cast<size_t>(c)]));
    std::string tag = require(pj, "tag").get<std::string>();
    if (tag != "Full" && tag != "Null") throw InputError("piece: tag must be Full or Null");
    S.pieces.emplace_back(std::move(anchor), std::move(dirs), std::move(box),
                          tag == "Full" ? Tag::Full : Tag::Null);
  }
  return S;
}

json to_json(const DyadicGridSet& A) {
  json cells = json::array();
  for (const auto& c : A.cells) {
    json idx = json::array();
    for (int j = 0; j < A.k; ++j) idx.push_back(c[static_cast<size_t>(j)]);
    cells.push_back(idx);
  }
  return json{{"k", A.k}, {"L", A.L}, {"cells", cells}};
}

DyadicGridSet grid_from_json(const json& j) {
  DyadicGridSet A(require(j, "k").get<int>(), require(j, "L").get<int>());
  for (const auto& cj : require(j, "cells")) {
    if (static_cast<int>(cj.size()) != A.k) throw InputError("grid: cell arity != k");
    Cell c{0, 0, 0};
    for (int i = 0; i < A.k; ++i) c[static_cast<size_t>(i)] = cj[static_cast<size_t>(i)].get<int32_t>();
    A.insert_checked(c);
  }
  return A;
}

json to_json(const SampleCloud& cloud) {
  json pts = json::array();
  for (const auto& pt : cloud.points) {
    json q = json::array();
    for (int j = 0; j < cloud.k; ++j) q.push_back(pt[j]);
    pts.push_back(q);
  }
  return json{{"k", cloud.k}, {"n", cloud.points.size()}, {"seed", cloud.seed}, {"points", pts}};
}

SampleCloud cloud_from_json(const json& j) {
  SampleCloud cloud;
  cloud.k = require(j, "k").get<int>();
  cloud.seed = j.value("seed", uint64_t{0});
  for (const auto& pj : require(j, "points")) {
    if (static_cast<int>(pj.size()) != cloud.k) throw InputError("cloud: point arity != k");
    DVec pt(cloud.k);
    for (int i = 0; i < cloud.k; ++i) pt[i] = pj[static_cast<size_t>(i)].get<double>();
    cloud.points.push_back(std::move(pt));
  }
  return cloud;
}

json to_json(const PiecewiseMap& F) {
  json pieces = json::array();
  for (const auto& piece : F.pieces) {
    json box = json::array();
    for (const auto& iv : piece.box) box.push_back(interval_to_json(iv));
    json rows = json::array();
    for (int r = 0; r < F.m; ++r) {
      json row = json::array();
      for (int c = 0; c < F.n; ++c) row.push_back(rat_to_json(piece.coef(r, c)));
      rows.push_back(row);
    }
    pieces.push_back(json{{"box", box},
                          {"tag", piece.tag == Tag::Full ? "Full" : "Null"},
                          {"coef", rows},
                          {"offset", ratvec_to_json(piece.offset)}});
  }
  return json{{"n", F.n}, {"m", F.m}, {"pieces", pieces}};
}

PiecewiseMap piecewise_map_from_json(const json& j) {
  PiecewiseMap F;
  F.n = require(j, "n").get<int>();
  F.m = require(j, "m").get<int>();
  for (const auto& pj : require(j, "pieces")) {
    MapPiece piece;
    const json& bj = require(pj, "box");
    if (static_cast<int>(bj.size()) != F.n) throw InputError("map piece: box arity != n");
    for (const auto& iv : bj) piece.box.push_back(interval_from_json(iv));
    std::string tag = require(pj, "tag").get<std::string>();
    if (tag != "Full" && tag != "Null") throw InputError("map piece: tag must be Full or Null");
    piece.tag = tag == "Full" ? Tag::Full : Tag::Null;
    const json& cj = require(pj, "coef");
    if (static_cast<int>(cj.size()) != F.m) throw InputError("map piece: coef rows != m");
    piece.coef.resize(F.m, F.n);
    for (int r = 0; r < F.m; ++r) {
      if (static_cast<int>(cj[static_cast<size_t>(r)].size()) != F.n)
        throw InputError("map piece: coef cols != n");
      for (int c = 0; c < F.n; ++c) piece.coef(r, c) = rat_from_json(cj[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    }
    piece.offset = ratvec_from_json(require(pj, "offset"), F.m);
    F.pieces.push_back(std::move(piece));
  }
  validate_piecewise_map(F);
  return F;
}

json to_json(const CopulaSpec& C) {
  if (auto* p = C.get_if<ProductCopula>()) return json{{"variant", "product"}, {"k", p->k}};
  if (auto* p = C.get_if<MinCopula>()) return json{{"variant", "min"}, {"k", p->k}};
  if (C.get_if<WLowerCopula>()) return json{{"variant", "w2"}};
  if (auto* s = C.get_if<ShuffleOfMin>()) {
    json pieces = json::array();
    for (const auto& piece : s->pieces)
      pieces.push_back(json{{"src", interval_to_json(piece.src)},
                            {"dst", interval_to_json(piece.dst)},
                            {"dir", piece.orientation}});
    return json{{"variant", "shuffle"}, {"pieces", pieces}};
  }
  if (auto* b = C.get_if<BipartiteCopula>())
    return json{{"variant", "bipartite"}, {"n", b->n}, {"map", to_json(b->map)}};
  throw InputError("unsupported copula variant 'raw' has no JSON form");
}

CopulaSpec copula_from_json(const json& j) {
  std::string variant = require(j, "variant").get<std::string>();
  if (variant == "product") return CopulaSpec::product(require(j, "k").get<int>());
  if (variant == "min") return CopulaSpec::min_copula(require(j, "k").get<int>());
  if (variant == "w2") return CopulaSpec::w2();
  if (variant == "shuffle") {
    ShuffleOfMin s;
    for (const auto& pj : require(j, "pieces")) {
      ShufflePiece piece;
      piece.src = interval_from_json(require(pj, "src"));
      piece.dst = interval_from_json(require(pj, "dst"));
      piece.orientation = require(pj, "dir").get<int>();
      s.pieces.push_back(std::move(piece));
    }
    return CopulaSpec::shuffle(std::move(s));
  }
  if (variant == "bipartite")
    return CopulaSpec::bipartite(require(j, "n").get<int>(),
                                 piecewise_map_from_json(require(j, "map")));
  throw InputError("unsupported copula variant '" + variant + "'");
}

SetDocument set_from_json(const json& j) {
  if (j.contains("pieces")) return piece_set_from_json(j);
  if (j.contains("cells")) return grid_from_json(j);
  throw InputError("set document needs either 'pieces' (symbolic) or 'cells' (grid)");
}

json to_json(const AxiomReport& rep) {
  json out{{"tolerance", rep.tolerance},
           {"grounded", json{{"pass", rep.grounded_pass}}},
           {"margins", json{{"pass", rep.margins_pass}, {"max_deviation", rep.margin_max_dev}}},
           {"k_increasing", json{{"pass", rep.k_increasing_pass}, {"min_volume", rep.min_volume}}},
           {"pass", rep.all_pass()}};
  if (!rep.grounded_pass) out["grounded"]["witness"] = rep.grounded_witness;
  if (!rep.margins_pass) out["margins"]["witness"] = rep.margin_witness;
  if (!rep.min_volume_box.empty()) {
    json box = json::array();
    for (const auto& iv : rep.min_volume_box) box.push_back(interval_to_json(iv));
    out["k_increasing"]["witness_box"] = box;
  }
  return out;
}

json to_json(const PropertyReport& rep) {
  static const char* names[7] = {"closure_is_closed",   "nesting",      "interior_closure",
                                 "monotone",            "union_rule",   "empty_criterion",
                                 "idempotent"};
  json items = json::object();
  for (size_t i = 0; i < 7; ++i) {
    json item{{"pass", rep.items[i].pass}};
    if (!rep.items[i].pass) item["witness"] = rep.items[i].witness;
    items[names[i]] = item;
  }
  return json{{"pass", rep.all_pass()}, {"items", items}};
}

json to_json(const EmptyClosureReport& rep) {
  json per = json::array();
  for (const auto& pr : rep.per_subspace) {
    json axes = json::array();
    for (int a : pr.W.axes) axes.push_back(a + 1);  // 1-based outside
    per.push_back(json{{"axes", axes}, {"measure", rat_to_json(pr.measure)}, {"positive", pr.positive}});
  }
  return json{{"empty", rep.closure_empty},
              {"all_projections_null", rep.all_projections_null},
              {"agree", rep.agree},
              {"projections", per}};
}

json to_json(const ClosednessResult& res) {
  json out{{"pass", res.closed}};
  if (!res.residual_pieces.pieces.empty()) out["residual_pieces"] = to_json(res.residual_pieces);
  if (!res.residual_cells.empty()) out["residual_cells"] = to_json(res.residual_cells);
  return out;
}

json to_json(const std::vector<HyperplaneViolation>& violations) {
  json arr = json::array();
  for (const auto& v : violations)
    arr.push_back(json{{"axis", v.axis + 1},  // 1-based outside
                       {"coordinate", rat_to_json(v.coordinate)},
                       {"witness", ratvec_to_json(v.witness)},
                       {"isolation_radius", rat_to_json(v.isolation_radius)},
                       {"piece_index", v.piece_index}});
  return json{{"pass", violations.empty()}, {"violations", arr}};
}

json to_json(const DimensionEstimate& est) {
  json counts = json::array();
  for (const auto& [L, n] : est.level_counts) counts.push_back(json{{"L", L}, {"cells", n}});
  return json{{"slope", est.slope}, {"counts", counts}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace essclose
