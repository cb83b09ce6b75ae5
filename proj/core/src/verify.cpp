#include "urysohn/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "urysohn/error.hpp"
#include "urysohn/graph.hpp"
#include "urysohn/serialize.hpp"

namespace urysohn {

namespace {

using Fn = std::vector<std::size_t>;
using Labels = std::vector<std::string>;
using Witness = std::optional<std::string>;

std::string q(const std::string& s) { return "'" + s + "'"; }

struct Plan {
  std::vector<std::string> names;
  std::vector<std::function<Witness()>> fns;

  void add(std::string name, std::function<Witness()> fn) {
    names.push_back(std::move(name));
    fns.push_back(std::move(fn));
  }
};

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail_parse(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail_parse(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Map and metric primitives. Maps are plain index tables and need not be
// bijections; checks report the first offending label.

Fn compose_fn(const Fn& outer, const Fn& inner) {
  Fn out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

Fn identity_fn(std::size_t n) {
  Fn out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

Fn power_fn(const Fn& m, std::uint64_t k) {
  Fn result = identity_fn(m.size());
  Fn base = m;
  while (k > 0) {
    if (k & 1) result = compose_fn(base, result);
    base = compose_fn(base, base);
    k >>= 1;
  }
  return result;
}

std::optional<Fn> inverse_fn(const Fn& m) {
  Fn inv(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] >= m.size() || inv[m[i]] != m.size()) return std::nullopt;
    inv[m[i]] = i;
  }
  return inv;
}

std::optional<Fn> signed_power(const Fn& m, std::int64_t k) {
  if (k >= 0) return power_fn(m, static_cast<std::uint64_t>(k));
  auto inv = inverse_fn(m);
  if (!inv) return std::nullopt;
  return power_fn(*inv, static_cast<std::uint64_t>(-(k + 1)) + 1);
}

Witness injective_witness(const Fn& m, const Labels& source, const Labels& target) {
  std::unordered_map<std::size_t, std::size_t> seen;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto [it, fresh] = seen.emplace(m[i], i);
    if (!fresh) return q(source[it->second]) + " and " + q(source[i]) + " both map to " + q(target[m[i]]);
  }
  return std::nullopt;
}

Witness agree_witness(const Fn& lhs, const Fn& rhs, const Labels& source, const Labels& target) {
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] != rhs[i]) {
      return "at " + q(source[i]) + ": " + q(target[lhs[i]]) + " versus " + q(target[rhs[i]]);
    }
  }
  return std::nullopt;
}

Witness metric_witness(const FiniteMetricSpace& s) {
  const std::size_t n = s.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (!s.d(x, x).is_zero()) return "d(" + q(s.label(x)) + ", itself) = " + s.d(x, x).str();
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (s.d(x, y) != s.d(y, x)) return "asymmetric at " + q(s.label(x)) + ", " + q(s.label(y));
      if (s.d(x, y).sign() <= 0) return "non-positive distance between " + q(s.label(x)) + " and " + q(s.label(y));
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (s.d(x, z) > s.d(x, y) + s.d(y, z)) {
          return "triangle (" + q(s.label(x)) + ", " + q(s.label(z)) + ", " + q(s.label(y)) + "): " + s.d(x, z).str() +
                 " > " + s.d(x, y).str() + " + " + s.d(y, z).str();
        }
      }
    }
  }
  return std::nullopt;
}

Witness preserves_witness(const FiniteMetricSpace& src, const FiniteMetricSpace& dst, const Fn& m) {
  for (std::size_t x = 0; x < src.size(); ++x) {
    for (std::size_t y = x; y < src.size(); ++y) {
      if (dst.d(m[x], m[y]) != src.d(x, y)) {
        return "d(" + q(src.label(x)) + ", " + q(src.label(y)) + ") = " + src.d(x, y).str() + " but images are at " +
               dst.d(m[x], m[y]).str();
      }
    }
  }
  return std::nullopt;
}

Witness same_space_witness(const FiniteMetricSpace& a, const FiniteMetricSpace& b) {
  if (a.points() != b.points()) return std::string("point lists differ");
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (a.d(x, y) != b.d(x, y)) return "d(" + q(a.label(x)) + ", " + q(a.label(y)) + ") differs";
    }
  }
  return std::nullopt;
}

Witness measure_witness(const Json& j, const EquidistributedAlgebra& a) {
  const Rational stored = rational_from_json(field(j, "measure"));
  const Rational expected(1, static_cast<std::int64_t>(a.size()));
  if (stored != expected) return "stored atom measure " + stored.str() + ", expected " + expected.str();
  return std::nullopt;
}

Witness equal_blocks_witness(const Fn& block_map, const Labels& sub, const Labels& super) {
  std::vector<std::size_t> size(sub.size(), 0);
  for (const auto b : block_map) ++size[b];
  if (super.size() % sub.size() != 0) return "block size is not an integer";
  const std::size_t k = super.size() / sub.size();
  for (std::size_t a = 0; a < sub.size(); ++a) {
    if (size[a] != k) return "block of " + q(sub[a]) + " has " + std::to_string(size[a]) + " atoms, expected " + std::to_string(k);
  }
  return std::nullopt;
}

/// upper restricted along block_map agrees with lower: block(upper(b)) = lower(block(b)).
Witness restricts_witness(const Fn& block_map, const Fn& upper, const Fn& lower, const Labels& super, const Labels& sub) {
  for (std::size_t b = 0; b < upper.size(); ++b) {
    if (block_map[upper[b]] != lower[block_map[b]]) {
      return "atom " + q(super[b]) + " lands below " + q(sub[block_map[upper[b]]]) + " instead of " +
             q(sub[lower[block_map[b]]]);
    }
  }
  return std::nullopt;
}

/// upper ∘ e = e ∘ lower for an embedding e.
Witness intertwines_witness(const Fn& e, const Fn& upper, const Fn& lower, const Labels& source, const Labels& target) {
  for (std::size_t x = 0; x < e.size(); ++x) {
    if (upper[e[x]] != e[lower[x]]) {
      return "at " + q(source[x]) + ": " + q(target[upper[e[x]]]) + " versus " + q(target[e[lower[x]]]);
    }
  }
  return std::nullopt;
}

EquidistributedAlgebra parse_algebra(const Json& j) { return algebra_from_json(j, false); }

std::vector<std::size_t> fiber_sizes(const Fn& block_map, std::size_t sub_size) {
  std::vector<std::size_t> size(sub_size, 0);
  for (const auto b : block_map) ++size[b];
  return size;
}

std::vector<std::vector<std::size_t>> fibers(const Fn& block_map, std::size_t sub_size) {
  std::vector<std::vector<std::size_t>> out(sub_size);
  for (std::size_t b = 0; b < block_map.size(); ++b) out[block_map[b]].push_back(b);
  return out;
}

// ---------------------------------------------------------------------------
// Plain structures.

void plan_algebra(Plan& plan, const Json& j) {
  auto a = std::make_shared<EquidistributedAlgebra>(parse_algebra(j));
  auto raw = std::make_shared<Json>(j);
  plan.add("atom measure", [a, raw] { return measure_witness(*raw, *a); });
}

void plan_inclusion(Plan& plan, const Json& j) {
  auto sub = std::make_shared<EquidistributedAlgebra>(parse_algebra(field(j, "sub")));
  auto super = std::make_shared<EquidistributedAlgebra>(parse_algebra(field(j, "super")));
  auto bm = std::make_shared<Fn>(map_from_json(field(j, "block_map"), super->atoms(), sub->atoms()));
  auto raw = std::make_shared<Json>(j);
  plan.add("sub measure", [sub, raw] { return measure_witness(raw->at("sub"), *sub); });
  plan.add("super measure", [super, raw] { return measure_witness(raw->at("super"), *super); });
  plan.add("equal blocks", [=] { return equal_blocks_witness(*bm, sub->atoms(), super->atoms()); });
}

void plan_automorphism(Plan& plan, const Json& j) {
  auto a = std::make_shared<EquidistributedAlgebra>(parse_algebra(field(j, "algebra")));
  auto m = std::make_shared<Fn>(map_from_json(field(j, "map"), a->atoms(), a->atoms()));
  auto raw = std::make_shared<Json>(j);
  plan.add("atom measure", [a, raw] { return measure_witness(raw->at("algebra"), *a); });
  plan.add("bijection", [a, m] { return injective_witness(*m, a->atoms(), a->atoms()); });
}

void plan_space(Plan& plan, const Json& j) {
  auto s = std::make_shared<FiniteMetricSpace>(space_from_json(j));
  plan.add("metric axioms", [s] { return metric_witness(*s); });
}

void plan_isometry(Plan& plan, const Json& j) {
  auto s = std::make_shared<FiniteMetricSpace>(space_from_json(field(j, "space")));
  auto m = std::make_shared<Fn>(map_from_json(field(j, "map"), s->points(), s->points()));
  plan.add("metric axioms", [s] { return metric_witness(*s); });
  plan.add("bijection", [s, m] { return injective_witness(*m, s->points(), s->points()); });
  plan.add("preserves distances", [s, m] { return preserves_witness(*s, *s, *m); });
}

void plan_embedding(Plan& plan, const Json& j) {
  auto src = std::make_shared<FiniteMetricSpace>(space_from_json(field(j, "source")));
  auto dst = std::make_shared<FiniteMetricSpace>(space_from_json(field(j, "target")));
  auto m = std::make_shared<Fn>(map_from_json(field(j, "map"), src->points(), dst->points()));
  plan.add("source metric axioms", [src] { return metric_witness(*src); });
  plan.add("target metric axioms", [dst] { return metric_witness(*dst); });
  plan.add("injective", [=] { return injective_witness(*m, src->points(), dst->points()); });
  plan.add("preserves distances", [=] { return preserves_witness(*src, *dst, *m); });
}

// ---------------------------------------------------------------------------
// Algebra amalgams.

struct AlgebraAmalgamData {
  EquidistributedAlgebra base;
  std::vector<EquidistributedAlgebra> parts;  // super algebras
  std::vector<Fn> block_maps;                 // part atom -> base atom
  EquidistributedAlgebra result;
  Rational result_measure;                    // as stored
  std::vector<Fn> factors;                    // factors[r][i]
  std::optional<std::vector<std::vector<std::vector<std::size_t>>>> stored_embeddings;  // [i][b]

  std::vector<std::size_t> pi(std::size_t i, std::size_t b) const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < result.size(); ++r) {
      if (factors[r][i] == b) out.push_back(r);
    }
    return out;
  }
};

Fn parse_factors(const Json& j, const EquidistributedAlgebra& result, const std::vector<EquidistributedAlgebra>& parts) {
  if (!j.is_object() || j.size() != result.size()) fail_parse("factors must list every result atom once");
  std::vector<Fn> rows;
  Fn flat;
  for (std::size_t r = 0; r < result.size(); ++r) {
    const Json& row = field(j, result.label(r).c_str());
    if (!row.is_array() || row.size() != parts.size()) {
      fail_parse("result atom '" + result.label(r) + "' needs " + std::to_string(parts.size()) + " factors");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (!row[i].is_string()) fail_parse("factor labels must be strings");
      const auto idx = parts[i].find(row[i].get<std::string>());
      if (!idx) fail_parse("factor '" + row[i].get<std::string>() + "' is not an atom of part " + std::to_string(i + 1));
      flat.push_back(*idx);
    }
  }
  return flat;
}

std::vector<Fn> unflatten(const Fn& flat, std::size_t width) {
  std::vector<Fn> out;
  for (std::size_t r = 0; width && r < flat.size() / width; ++r) {
    out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(r * width), flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
  }
  return out;
}

void plan_algebra_amalgam_core(Plan& plan, std::shared_ptr<const AlgebraAmalgamData> d) {
  plan.add("result measure", [d]() -> Witness {
    const Rational expected(1, static_cast<std::int64_t>(d->result.size()));
    if (d->result_measure != expected) return "stored atom measure " + d->result_measure.str() + ", expected " + expected.str();
    return std::nullopt;
  });
  plan.add("factors share a base atom", [d]() -> Witness {
    for (std::size_t r = 0; r < d->result.size(); ++r) {
      const std::size_t a = d->block_maps[0][d->factors[r][0]];
      for (std::size_t i = 1; i < d->parts.size(); ++i) {
        if (d->block_maps[i][d->factors[r][i]] != a) return "result atom " + q(d->result.label(r)) + " mixes base atoms";
      }
    }
    return std::nullopt;
  });
  plan.add("every compatible tuple appears once", [d]() -> Witness {
    std::set<Fn> seen;
    for (std::size_t r = 0; r < d->result.size(); ++r) {
      if (!seen.insert(d->factors[r]).second) return "result atom " + q(d->result.label(r)) + " repeats a tuple";
    }
    std::vector<std::vector<std::size_t>> sizes;
    for (std::size_t i = 0; i < d->parts.size(); ++i) sizes.push_back(fiber_sizes(d->block_maps[i], d->base.size()));
    std::size_t expected = 0;
    for (std::size_t a = 0; a < d->base.size(); ++a) {
      std::size_t prod = 1;
      for (const auto& s : sizes) prod *= s[a];
      expected += prod;
    }
    if (expected != d->result.size()) {
      return std::to_string(d->result.size()) + " result atoms for " + std::to_string(expected) + " compatible tuples";
    }
    return std::nullopt;
  });
  plan.add("product measure formula", [d]() -> Witness {
    const std::size_t n = d->parts.size();
    const Rational base_measure(1, static_cast<std::int64_t>(d->base.size()));
    Rational total(0);
    for (std::size_t r = 0; r < d->result.size(); ++r) {
      Rational m(1);
      for (std::size_t i = 0; i < n; ++i) m *= Rational(1, static_cast<std::int64_t>(d->parts[i].size()));
      m /= base_measure.pow(static_cast<long>(n) - 1);
      if (m != d->result_measure) {
        return "atom " + q(d->result.label(r)) + " has product measure " + m.str() + ", stored " + d->result_measure.str();
      }
      total += m;
    }
    if (d->result.size() && total != Rational(1)) return "measures sum to " + total.str();
    return std::nullopt;
  });
  plan.add("embeddings preserve measure", [d]() -> Witness {
    for (std::size_t i = 0; i < d->parts.size(); ++i) {
      const Rational part_measure(1, static_cast<std::int64_t>(d->parts[i].size()));
      for (std::size_t b = 0; b < d->parts[i].size(); ++b) {
        const Rational m = Rational(static_cast<std::int64_t>(d->pi(i, b).size())) * d->result_measure;
        if (m != part_measure) {
          return "pi_" + std::to_string(i + 1) + "(" + q(d->parts[i].label(b)) + ") has measure " + m.str();
        }
      }
    }
    return std::nullopt;
  });
  plan.add("diagram commutes", [d]() -> Witness {
    std::vector<std::vector<std::set<std::size_t>>> images(d->parts.size(), std::vector<std::set<std::size_t>>(d->base.size()));
    for (std::size_t i = 0; i < d->parts.size(); ++i) {
      for (std::size_t b = 0; b < d->parts[i].size(); ++b) {
        for (const auto r : d->pi(i, b)) images[i][d->block_maps[i][b]].insert(r);
      }
    }
    for (std::size_t a = 0; a < d->base.size(); ++a) {
      for (std::size_t i = 1; i < d->parts.size(); ++i) {
        if (images[i][a] != images[0][a]) return "base atom " + q(d->base.label(a)) + " embeds differently through part " + std::to_string(i + 1);
      }
    }
    return std::nullopt;
  });
  if (d->stored_embeddings) {
    plan.add("stored embeddings", [d]() -> Witness {
      for (std::size_t i = 0; i < d->parts.size(); ++i) {
        for (std::size_t b = 0; b < d->parts[i].size(); ++b) {
          if ((*d->stored_embeddings)[i][b] != d->pi(i, b)) {
            return "pi_" + std::to_string(i + 1) + "(" + q(d->parts[i].label(b)) + ") differs from the factors";
          }
        }
      }
      return std::nullopt;
    });
  }
}

void plan_algebra_amalgam(Plan& plan, const Json& j) {
  auto d = std::make_shared<AlgebraAmalgamData>();
  auto raw = std::make_shared<Json>(j);
  d->base = parse_algebra(field(j, "base"));
  const Json& parts = field(j, "parts");
  if (!parts.is_array() || parts.empty()) fail_parse("an amalgam needs at least one part");
  std::vector<EquidistributedAlgebra> subs;
  for (const auto& p : parts) {
    subs.push_back(parse_algebra(field(p, "sub")));
    d->parts.push_back(parse_algebra(field(p, "super")));
    d->block_maps.push_back(map_from_json(field(p, "block_map"), d->parts.back().atoms(), subs.back().atoms()));
  }
  d->result = parse_algebra(field(j, "result"));
  d->result_measure = rational_from_json(field(field(j, "result"), "measure"));
  d->factors = unflatten(parse_factors(field(j, "factors"), d->result, d->parts), d->parts.size());
  const Json& emb = field(j, "embeddings");
  if (!emb.is_array() || emb.size() != d->parts.size()) fail_parse("one embedding per part expected");
  std::vector<std::vector<std::vector<std::size_t>>> stored(d->parts.size());
  for (std::size_t i = 0; i < d->parts.size(); ++i) {
    for (std::size_t b = 0; b < d->parts[i].size(); ++b) {
      const Json& arr = field(emb[i], d->parts[i].label(b).c_str());
      std::vector<std::size_t> set;
      for (const auto& v : arr) {
        if (!v.is_string() || !d->result.find(v.get<std::string>())) fail_parse("embedding names an unknown result atom");
        set.push_back(*d->result.find(v.get<std::string>()));
      }
      std::sort(set.begin(), set.end());
      stored[i].push_back(std::move(set));
    }
  }
  d->stored_embeddings = std::move(stored);

  plan.add("base measure", [d, raw] { return measure_witness(raw->at("base"), d->base); });
  for (std::size_t i = 0; i < d->parts.size(); ++i) {
    const std::string tag = "part " + std::to_string(i + 1);
    auto sub = std::make_shared<EquidistributedAlgebra>(subs[i]);
    plan.add(tag + " sits over the base", [d, sub]() -> Witness {
      if (sub->atoms() != d->base.atoms()) return std::string("subalgebra differs from the base");
      return std::nullopt;
    });
    plan.add(tag + " measure", [d, raw, i] { return measure_witness(raw->at("parts")[i].at("super"), d->parts[i]); });
    plan.add(tag + " equal blocks", [d, i] { return equal_blocks_witness(d->block_maps[i], d->base.atoms(), d->parts[i].atoms()); });
  }
  plan_algebra_amalgam_core(plan, d);
}

// ---------------------------------------------------------------------------
// Algebra root certificates.

void plan_algebra_root(Plan& plan, const Json& j) {
  struct Data {
    std::size_t n;
    EquidistributedAlgebra A, B;
    Fn block_map, g, f, h;
    std::vector<std::vector<std::size_t>> psi;
    std::shared_ptr<AlgebraAmalgamData> amalgam;
  };
  auto d = std::make_shared<Data>();
  auto raw = std::make_shared<Json>(j);
  d->n = count_field(j, "n");
  if (d->n == 0) fail_parse("n must be positive");
  const Json& base = field(j, "base");
  d->A = parse_algebra(field(base, "sub"));
  d->B = parse_algebra(field(base, "super"));
  d->block_map = map_from_json(field(base, "block_map"), d->B.atoms(), d->A.atoms());
  d->g = map_from_json(field(j, "g"), d->A.atoms(), d->A.atoms());
  d->f = map_from_json(field(j, "f"), d->B.atoms(), d->B.atoms());
  const Json& psi = field(j, "psi");
  if (!psi.is_array()) fail_parse("psi must be an array of rows");
  for (const auto& row : psi) {
    std::vector<std::size_t> r;
    for (const auto& v : row) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) fail_parse("psi entries are positions");
      r.push_back(v.get<std::size_t>());
    }
    d->psi.push_back(std::move(r));
  }

  auto am = std::make_shared<AlgebraAmalgamData>();
  am->base = d->A;
  for (std::size_t i = 1; i <= d->n; ++i) {
    Labels copy;
    for (const auto& l : d->B.atoms()) copy.push_back(d->n == 1 ? l : l + "@" + std::to_string(i));
    am->parts.emplace_back(std::move(copy));
    am->block_maps.push_back(d->block_map);
  }
  const Json& ambient = field(j, "ambient");
  am->result = parse_algebra(field(ambient, "result"));
  am->result_measure = rational_from_json(field(field(ambient, "result"), "measure"));
  am->factors = unflatten(parse_factors(field(ambient, "factors"), am->result, am->parts), d->n);
  d->amalgam = am;
  d->h = map_from_json(field(j, "h"), am->result.atoms(), am->result.atoms());

  plan.add("sub measure", [d, raw] { return measure_witness(raw->at("base").at("sub"), d->A); });
  plan.add("super measure", [d, raw] { return measure_witness(raw->at("base").at("super"), d->B); });
  plan.add("equal blocks", [d] { return equal_blocks_witness(d->block_map, d->A.atoms(), d->B.atoms()); });
  plan.add("g is a bijection", [d] { return injective_witness(d->g, d->A.atoms(), d->A.atoms()); });
  plan.add("f is a bijection", [d] { return injective_witness(d->f, d->B.atoms(), d->B.atoms()); });
  plan.add("f restricts to g^n", [d] {
    return restricts_witness(d->block_map, d->f, power_fn(d->g, d->n), d->B.atoms(), d->A.atoms());
  });
  plan.add("psi tables", [d]() -> Witness {
    const auto blocks = fibers(d->block_map, d->A.size());
    const Fn phi_n = power_fn(d->g, d->n);
    if (d->psi.size() != d->A.size()) return std::string("psi needs one row per atom of the subalgebra");
    for (std::size_t i = 0; i < d->A.size(); ++i) {
      const auto& row = d->psi[i];
      if (row.size() != blocks[i].size()) return "psi row of " + q(d->A.label(i)) + " has the wrong length";
      std::vector<bool> hit(row.size(), false);
      for (std::size_t jj = 0; jj < row.size(); ++jj) {
        if (row[jj] >= row.size() || hit[row[jj]]) return "psi(" + q(d->A.label(i)) + ", .) is not a bijection";
        hit[row[jj]] = true;
        const auto& target = blocks[phi_n[i]];
        if (d->f[blocks[i][jj]] != target.at(row[jj])) {
          return "f(" + q(d->B.label(blocks[i][jj])) + ") is not " + q(d->B.label(target[row[jj]]));
        }
      }
    }
    return std::nullopt;
  });
  plan_algebra_amalgam_core(plan, am);
  plan.add("ambient size law", [d]() -> Witness {
    const Rational expected = Rational(static_cast<std::int64_t>(d->B.size())).pow(static_cast<long>(d->n)) /
                              Rational(static_cast<std::int64_t>(d->A.size())).pow(static_cast<long>(d->n) - 1);
    if (Rational(static_cast<std::int64_t>(d->amalgam->result.size())) != expected) {
      return std::to_string(d->amalgam->result.size()) + " atoms, expected " + expected.str();
    }
    return std::nullopt;
  });
  plan.add("h is a bijection", [d] {
    const auto& atoms = d->amalgam->result.atoms();
    return injective_witness(d->h, atoms, atoms);
  });
  plan.add("h follows the product formula", [d]() -> Witness {
    // h(b_i^{j1}⊗…⊗b_i^{jn}) = b_{φ(i)}^{ψ(i,jn)}⊗b_{φ(i)}^{j1}⊗…⊗b_{φ(i)}^{j(n−1)}
    const auto& am = *d->amalgam;
    const auto blocks = fibers(d->block_map, d->A.size());
    std::vector<std::size_t> pos(d->B.size());
    for (const auto& blk : blocks) {
      for (std::size_t t = 0; t < blk.size(); ++t) pos[blk[t]] = t;
    }
    std::map<Fn, std::size_t> index;
    for (std::size_t r = 0; r < am.result.size(); ++r) index.emplace(am.factors[r], r);
    for (std::size_t r = 0; r < am.result.size(); ++r) {
      const std::size_t i = d->block_map[am.factors[r][0]];
      const std::size_t i2 = d->g[i];
      if (i >= d->psi.size() || pos[am.factors[r][d->n - 1]] >= d->psi[i].size()) return std::string("psi out of range");
      Fn expected(d->n);
      expected[0] = blocks[i2].at(d->psi[i][pos[am.factors[r][d->n - 1]]]);
      for (std::size_t t = 1; t < d->n; ++t) expected[t] = blocks[i2].at(pos[am.factors[r][t - 1]]);
      const auto it = index.find(expected);
      if (it == index.end() || it->second != d->h[r]) return "h(" + q(am.result.label(r)) + ") breaks the formula";
    }
    return std::nullopt;
  });
  plan.add("h extends g on the diagonal", [d]() -> Witness {
    const auto& am = *d->amalgam;
    std::vector<std::set<std::size_t>> diag(d->A.size());
    for (std::size_t r = 0; r < am.result.size(); ++r) diag[d->block_map[am.factors[r][0]]].insert(r);
    for (std::size_t a = 0; a < d->A.size(); ++a) {
      std::set<std::size_t> image;
      for (const auto r : diag[a]) image.insert(d->h[r]);
      if (image != diag[d->g[a]]) return "h moves the diagonal of " + q(d->A.label(a)) + " off the diagonal of " + q(d->A.label(d->g[a]));
    }
    return std::nullopt;
  });
  plan.add("h^n extends f through pi_n", [d]() -> Witness {
    const auto& am = *d->amalgam;
    const Fn hn = power_fn(d->h, d->n);
    for (std::size_t b = 0; b < d->B.size(); ++b) {
      std::set<std::size_t> image, expected;
      for (const auto r : am.pi(d->n - 1, b)) image.insert(hn[r]);
      for (const auto r : am.pi(d->n - 1, d->f[b])) expected.insert(r);
      if (image != expected) return "h^n(pi_n(" + q(d->B.label(b)) + ")) is not pi_n(f(" + q(d->B.label(b)) + "))";
    }
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// Metric amalgams and roots.

/// Conditions of the free metric amalgam for parts ιᵢ: A → Bᵢ with πᵢ: Bᵢ → X
/// and the base copy β: A → X.
struct MetricAmalgamData {
  FiniteMetricSpace base;
  std::vector<FiniteMetricSpace> parts;
  std::vector<Fn> iota;  // A → Bᵢ
  FiniteMetricSpace result;
  Fn base_map;           // A → X
  std::vector<Fn> pi;    // Bᵢ → X
};

void plan_metric_amalgam_core(Plan& plan, std::shared_ptr<const MetricAmalgamData> d) {
  plan.add("ambient metric axioms", [d] { return metric_witness(d->result); });
  plan.add("base copy is isometric", [d]() -> Witness {
    if (auto w = injective_witness(d->base_map, d->base.points(), d->result.points())) return w;
    return preserves_witness(d->base, d->result, d->base_map);
  });
  for (std::size_t i = 0; i < d->parts.size(); ++i) {
    const std::string tag = "pi_" + std::to_string(i + 1);
    plan.add(tag + " is isometric", [d, i]() -> Witness {
      if (auto w = injective_witness(d->pi[i], d->parts[i].points(), d->result.points())) return w;
      return preserves_witness(d->parts[i], d->result, d->pi[i]);
    });
    plan.add(tag + " commutes with the base", [d, i] {
      return agree_witness(compose_fn(d->pi[i], d->iota[i]), d->base_map, d->base.points(), d->result.points());
    });
  }
  plan.add("parts cover the ambient space once", [d]() -> Witness {
    std::vector<int> owner(d->result.size(), -1);
    for (const auto x : d->base_map) owner[x] = -2;
    for (std::size_t i = 0; i < d->parts.size(); ++i) {
      std::vector<bool> is_base(d->parts[i].size(), false);
      for (const auto y : d->iota[i]) is_base[y] = true;
      for (std::size_t y = 0; y < d->parts[i].size(); ++y) {
        if (is_base[y]) continue;
        const auto x = d->pi[i][y];
        if (owner[x] != -1) return "point " + q(d->result.label(x)) + " is claimed twice";
        owner[x] = static_cast<int>(i);
      }
    }
    for (std::size_t x = 0; x < d->result.size(); ++x) {
      if (owner[x] == -1) return "point " + q(d->result.label(x)) + " lies in no part";
    }
    return std::nullopt;
  });
  plan.add("cross-part distances are min over the base", [d]() -> Witness {
    for (std::size_t i = 0; i < d->parts.size(); ++i) {
      std::vector<bool> bi(d->parts[i].size(), false);
      for (const auto y : d->iota[i]) bi[y] = true;
      for (std::size_t j = i + 1; j < d->parts.size(); ++j) {
        std::vector<bool> bj(d->parts[j].size(), false);
        for (const auto y : d->iota[j]) bj[y] = true;
        for (std::size_t x = 0; x < d->parts[i].size(); ++x) {
          if (bi[x]) continue;
          for (std::size_t y = 0; y < d->parts[j].size(); ++y) {
            if (bj[y]) continue;
            std::optional<Rational> best;
            for (std::size_t z = 0; z < d->base.size(); ++z) {
              Rational via = d->parts[i].d(x, d->iota[i][z]) + d->parts[j].d(d->iota[j][z], y);
              if (!best || via < *best) best = std::move(via);
            }
            if (!best || d->result.d(d->pi[i][x], d->pi[j][y]) != *best) {
              return "distance between " + q(d->result.label(d->pi[i][x])) + " and " + q(d->result.label(d->pi[j][y])) +
                     " is " + d->result.d(d->pi[i][x], d->pi[j][y]).str() + ", formula gives " + (best ? best->str() : "nothing");
            }
          }
        }
      }
    }
    return std::nullopt;
  });
}

void plan_metric_amalgam(Plan& plan, const Json& j) {
  auto d = std::make_shared<MetricAmalgamData>();
  d->base = space_from_json(field(j, "base"));
  const Json& parts = field(j, "parts");
  if (!parts.is_array() || parts.empty()) fail_parse("an amalgam needs at least one part");
  std::vector<FiniteMetricSpace> sources;
  for (const auto& p : parts) {
    sources.push_back(space_from_json(field(p, "source")));
    d->parts.push_back(space_from_json(field(p, "target")));
    d->iota.push_back(map_from_json(field(p, "map"), sources.back().points(), d->parts.back().points()));
  }
  d->result = space_from_json(field(j, "result"));
  d->base_map = map_from_json(field(j, "base_map"), d->base.points(), d->result.points());
  const Json& emb = field(j, "embeddings");
  if (!emb.is_array() || emb.size() != d->parts.size()) fail_parse("one embedding per part expected");
  for (std::size_t i = 0; i < d->parts.size(); ++i) {
    d->pi.push_back(map_from_json(emb[i], d->parts[i].points(), d->result.points()));
  }
  plan.add("base metric axioms", [d] { return metric_witness(d->base); });
  for (std::size_t i = 0; i < d->parts.size(); ++i) {
    const std::string tag = "part " + std::to_string(i + 1);
    auto src = std::make_shared<FiniteMetricSpace>(sources[i]);
    plan.add(tag + " embeds the base", [d, src]() { return same_space_witness(*src, d->base); });
    plan.add(tag + " metric axioms", [d, i] { return metric_witness(d->parts[i]); });
    plan.add(tag + " inclusion is isometric", [d, i]() -> Witness {
      if (auto w = injective_witness(d->iota[i], d->base.points(), d->parts[i].points())) return w;
      return preserves_witness(d->base, d->parts[i], d->iota[i]);
    });
  }
  plan_metric_amalgam_core(plan, d);
}

void plan_metric_root(Plan& plan, const Json& j) {
  struct Data {
    std::size_t n;
    FiniteMetricSpace A, B, A_again;
    Fn iota, f, g, h;
    std::vector<Fn> stored_iota;
  };
  auto d = std::make_shared<Data>();
  d->n = count_field(j, "n");
  if (d->n == 0) fail_parse("n must be positive");
  const Json& base = field(j, "base_inclusion");
  d->A = space_from_json(field(base, "source"));
  d->B = space_from_json(field(base, "target"));
  d->iota = map_from_json(field(base, "map"), d->A.points(), d->B.points());
  d->f = map_from_json(field(j, "f"), d->A.points(), d->A.points());
  d->g = map_from_json(field(j, "g"), d->B.points(), d->B.points());
  auto am = std::make_shared<MetricAmalgamData>();
  am->base = d->A;
  am->result = space_from_json(field(j, "ambient"));
  const Json& iota = field(j, "iota");
  const Json& pi = field(j, "pi");
  if (!iota.is_array() || iota.size() != d->n || !pi.is_array() || pi.size() != d->n) fail_parse("iota and pi need n entries");
  for (std::size_t i = 0; i < d->n; ++i) {
    d->stored_iota.push_back(map_from_json(iota[i], d->A.points(), d->B.points()));
    am->parts.push_back(d->B);
    am->pi.push_back(map_from_json(pi[i], d->B.points(), am->result.points()));
  }
  am->base_map = map_from_json(field(j, "base_in_ambient"), d->A.points(), am->result.points());
  d->h = map_from_json(field(j, "h"), am->result.points(), am->result.points());

  // ιᵢ = ι∘f^{−i}, recomputed; a non-invertible f leaves them undefined.
  const auto f_inv = inverse_fn(d->f);
  for (std::size_t i = 1; i <= d->n; ++i) {
    am->iota.push_back(f_inv ? compose_fn(d->iota, power_fn(*f_inv, i)) : d->stored_iota[i - 1]);
  }

  plan.add("A metric axioms", [d] { return metric_witness(d->A); });
  plan.add("B metric axioms", [d] { return metric_witness(d->B); });
  plan.add("A sits isometrically in B", [d]() -> Witness {
    if (auto w = injective_witness(d->iota, d->A.points(), d->B.points())) return w;
    return preserves_witness(d->A, d->B, d->iota);
  });
  plan.add("f is an isometry of A", [d]() -> Witness {
    if (auto w = injective_witness(d->f, d->A.points(), d->A.points())) return w;
    return preserves_witness(d->A, d->A, d->f);
  });
  plan.add("g is an isometry of B", [d]() -> Witness {
    if (auto w = injective_witness(d->g, d->B.points(), d->B.points())) return w;
    return preserves_witness(d->B, d->B, d->g);
  });
  plan.add("g restricts to f^n on A", [d] {
    return intertwines_witness(d->iota, d->g, power_fn(d->f, d->n), d->A.points(), d->B.points());
  });
  plan.add("copies are iota composed with f^-i", [d, f_inv]() -> Witness {
    if (!f_inv) return std::string("f is not invertible");
    for (std::size_t i = 1; i <= d->n; ++i) {
      if (auto w = agree_witness(d->stored_iota[i - 1], compose_fn(d->iota, power_fn(*f_inv, i)), d->A.points(), d->B.points())) {
        return "copy " + std::to_string(i) + ": " + *w;
      }
    }
    return std::nullopt;
  });
  plan_metric_amalgam_core(plan, am);
  plan.add("ambient size law", [d, am]() -> Witness {
    const std::size_t expected = d->A.size() + d->n * (d->B.size() - d->A.size());
    if (d->n == 1) return std::nullopt;
    if (am->result.size() != expected) return std::to_string(am->result.size()) + " points, expected " + std::to_string(expected);
    return std::nullopt;
  });
  plan.add("h is an isometry", [d, am]() -> Witness {
    if (auto w = injective_witness(d->h, am->result.points(), am->result.points())) return w;
    return preserves_witness(am->result, am->result, d->h);
  });
  plan.add("h restricts to f", [d, am] {
    return intertwines_witness(am->base_map, d->h, d->f, d->A.points(), am->result.points());
  });
  plan.add("h^n commutes with pi_1 and g", [d, am] {
    return intertwines_witness(am->pi[0], power_fn(d->h, d->n), d->g, d->B.points(), am->result.points());
  });
}

// ---------------------------------------------------------------------------
// Towers.

struct AlgebraStage {
  EquidistributedAlgebra algebra;
  Fn g, f;
  std::optional<Fn> block_map;
};

std::vector<AlgebraStage> parse_algebra_stages(const Json& j, const char* g_key, const char* f_key) {
  std::vector<AlgebraStage> out;
  const Json& stages = field(j, "stages");
  if (!stages.is_array()) fail_parse("stages must be an array");
  for (const auto& s : stages) {
    AlgebraStage st;
    st.algebra = parse_algebra(field(s, "algebra"));
    st.g = map_from_json(field(s, g_key), st.algebra.atoms(), st.algebra.atoms());
    if (f_key) st.f = map_from_json(field(s, f_key), st.algebra.atoms(), st.algebra.atoms());
    const Json& bm = field(s, "block_map");
    if (!bm.is_null()) {
      if (out.empty()) fail_parse("the first stage has no predecessor");
      st.block_map = map_from_json(bm, st.algebra.atoms(), out.back().algebra.atoms());
    } else if (!out.empty()) {
      fail_parse("stage " + std::to_string(out.size()) + " lacks its inclusion");
    }
    out.push_back(std::move(st));
  }
  return out;
}

void plan_algebra_tower(Plan& plan, const Json& j, bool pair) {
  auto raw = std::make_shared<Json>(j);
  const std::size_t n = pair ? count_field(j, "n") : 0;
  if (pair && n == 0) fail_parse("n must be positive");
  auto stages = std::make_shared<std::vector<AlgebraStage>>(parse_algebra_stages(j, pair ? "g" : "generator", pair ? "f" : nullptr));
  if (stages->empty()) fail_parse("a tower has at least one stage");
  if (pair) {
    plan.add("stage 0 is trivial", [stages]() -> Witness {
      const auto& s0 = stages->front();
      if (s0.algebra.size() != 1) return "stage 0 has " + std::to_string(s0.algebra.size()) + " atoms";
      return std::nullopt;
    });
  }
  for (std::size_t i = 0; i < stages->size(); ++i) {
    const std::string tag = "stage " + std::to_string(pair ? i : i + 1);
    plan.add(tag + " measure", [stages, raw, i] { return measure_witness(raw->at("stages")[i].at("algebra"), (*stages)[i].algebra); });
    plan.add(tag + (pair ? " g is a bijection" : " generator is a bijection"), [stages, i] {
      const auto& a = (*stages)[i].algebra.atoms();
      return injective_witness((*stages)[i].g, a, a);
    });
    if (pair) {
      plan.add(tag + " f = g^n", [stages, i, n] {
        const auto& s = (*stages)[i];
        return agree_witness(s.f, power_fn(s.g, n), s.algebra.atoms(), s.algebra.atoms());
      });
    }
    if (i == 0) continue;
    plan.add(tag + " inclusion has equal blocks", [stages, i] {
      return equal_blocks_witness(*(*stages)[i].block_map, (*stages)[i - 1].algebra.atoms(), (*stages)[i].algebra.atoms());
    });
    if (pair) {
      plan.add(tag + " g extends the previous g", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return restricts_witness(*s.block_map, s.g, p.g, s.algebra.atoms(), p.algebra.atoms());
      });
      plan.add(tag + " f extends the previous f", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return restricts_witness(*s.block_map, s.f, p.f, s.algebra.atoms(), p.algebra.atoms());
      });
    } else {
      plan.add(tag + " generator power extends the previous generator", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return restricts_witness(*s.block_map, power_fn(s.g, i + 1), p.g, s.algebra.atoms(), p.algebra.atoms());
      });
    }
  }
}

struct MetricStage {
  FiniteMetricSpace space;
  Fn g, f;
  std::optional<Fn> embedding;
};

std::vector<MetricStage> parse_metric_stages(const Json& j, const char* g_key, const char* f_key) {
  std::vector<MetricStage> out;
  const Json& stages = field(j, "stages");
  if (!stages.is_array()) fail_parse("stages must be an array");
  for (const auto& s : stages) {
    MetricStage st;
    st.space = space_from_json(field(s, "space"));
    st.g = map_from_json(field(s, g_key), st.space.points(), st.space.points());
    if (f_key) st.f = map_from_json(field(s, f_key), st.space.points(), st.space.points());
    const Json& e = field(s, "embedding");
    if (!e.is_null()) {
      if (out.empty()) fail_parse("the first stage has no predecessor");
      st.embedding = map_from_json(e, out.back().space.points(), st.space.points());
    } else if (!out.empty()) {
      fail_parse("stage " + std::to_string(out.size()) + " lacks its embedding");
    }
    out.push_back(std::move(st));
  }
  return out;
}

void plan_metric_tower(Plan& plan, const Json& j, bool pair) {
  const std::size_t n = pair ? count_field(j, "n") : 0;
  if (pair && n == 0) fail_parse("n must be positive");
  auto stages = std::make_shared<std::vector<MetricStage>>(parse_metric_stages(j, pair ? "g" : "generator", pair ? "f" : nullptr));
  if (stages->empty()) fail_parse("a tower has at least one stage");
  if (pair) {
    plan.add("stage 0 is empty", [stages]() -> Witness {
      if (!stages->front().space.empty()) return "stage 0 has " + std::to_string(stages->front().space.size()) + " points";
      return std::nullopt;
    });
  }
  for (std::size_t i = 0; i < stages->size(); ++i) {
    const std::string tag = "stage " + std::to_string(pair ? i : i + 1);
    plan.add(tag + " metric axioms", [stages, i] { return metric_witness((*stages)[i].space); });
    plan.add(tag + (pair ? " g is an isometry" : " generator is an isometry"), [stages, i]() -> Witness {
      const auto& s = (*stages)[i];
      if (auto w = injective_witness(s.g, s.space.points(), s.space.points())) return w;
      return preserves_witness(s.space, s.space, s.g);
    });
    if (pair) {
      plan.add(tag + " f = g^n", [stages, i, n] {
        const auto& s = (*stages)[i];
        return agree_witness(s.f, power_fn(s.g, n), s.space.points(), s.space.points());
      });
    }
    if (i == 0) continue;
    plan.add(tag + " embedding is isometric", [stages, i]() -> Witness {
      const auto& s = (*stages)[i];
      const auto& p = (*stages)[i - 1];
      if (auto w = injective_witness(*s.embedding, p.space.points(), s.space.points())) return w;
      return preserves_witness(p.space, s.space, *s.embedding);
    });
    if (pair) {
      plan.add(tag + " g extends the previous g", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return intertwines_witness(*s.embedding, s.g, p.g, p.space.points(), s.space.points());
      });
      plan.add(tag + " f extends the previous f", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return intertwines_witness(*s.embedding, s.f, p.f, p.space.points(), s.space.points());
      });
    } else {
      plan.add(tag + " generator power extends the previous generator", [stages, i] {
        const auto& s = (*stages)[i];
        const auto& p = (*stages)[i - 1];
        return intertwines_witness(*s.embedding, power_fn(s.g, i + 1), p.g, p.space.points(), s.space.points());
      });
    }
  }
}

void plan_qaction(Plan& plan, const Json& j) {
  const Json& side = field(j, "side");
  if (!side.is_string()) fail_parse("side must be a string");
  const Json& kj = field(j, "k");
  if (!kj.is_number_integer()) fail_parse("k must be an integer");
  const std::int64_t k = kj.get<std::int64_t>();
  const std::size_t stage = count_field(j, "stage");
  const Json& tower = field(j, "tower");
  Labels labels;
  Fn generator;
  std::size_t stage_count = 0;
  if (side.get<std::string>() == "algebra") {
    if (infer_kind(tower) != "algebra-root-tower") fail_parse("an algebra q-action needs an algebra root tower");
    plan_algebra_tower(plan, tower, false);
    const auto stages = parse_algebra_stages(tower, "generator", nullptr);
    stage_count = stages.size();
    if (stage >= 1 && stage <= stage_count) {
      labels = stages[stage - 1].algebra.atoms();
      generator = stages[stage - 1].g;
    }
  } else if (side.get<std::string>() == "metric") {
    if (infer_kind(tower) != "metric-root-tower") fail_parse("a metric q-action needs a metric root tower");
    plan_metric_tower(plan, tower, false);
    const auto stages = parse_metric_stages(tower, "generator", nullptr);
    stage_count = stages.size();
    if (stage >= 1 && stage <= stage_count) {
      labels = stages[stage - 1].space.points();
      generator = stages[stage - 1].g;
    }
  } else {
    fail_parse("side must be \"algebra\" or \"metric\"");
  }
  if (stage == 0 || stage > stage_count) {
    plan.add("stage within the tower", [stage, stage_count]() -> Witness {
      return "stage " + std::to_string(stage) + " of " + std::to_string(stage_count);
    });
    return;
  }
  auto action = std::make_shared<Fn>(map_from_json(field(j, "action"), labels, labels));
  auto lab = std::make_shared<Labels>(std::move(labels));
  auto gen = std::make_shared<Fn>(std::move(generator));
  plan.add("action is the k-th power of the generator", [action, lab, gen, k]() -> Witness {
    const auto expected = signed_power(*gen, k);
    if (!expected) return std::string("generator is not invertible");
    return agree_witness(*action, *expected, *lab, *lab);
  });
}

// ---------------------------------------------------------------------------
// Suspensions and the Rohlin pipeline.

struct SuspensionData {
  FiniteMetricSpace carrier;
  Fn domain;  // A → carrier
  Fn f;       // A → carrier
  std::size_t s = 0;
  FiniteMetricSpace space;
  Fn shift;
  Fn point;   // (x·|A| + a) → index in space
};

Rational d_of(const SuspensionData& d, std::size_t a, std::size_t b) { return d.carrier.d(d.domain[a], d.domain[b]); }
Rational d_f_of(const SuspensionData& d, std::size_t a, std::size_t b) { return d.carrier.d(d.domain[a], d.f[b]); }

/// Labels "<a>•<x>" located in the stored space; unknown or missing labels are parse errors.
Fn locate_suspension_points(const SuspensionData& d) {
  const std::size_t k = d.domain.size();
  if (d.space.size() != k * d.s) fail_parse("suspension has " + std::to_string(d.space.size()) + " points, expected " + std::to_string(k * d.s));
  Fn out(k * d.s);
  for (std::size_t x = 0; x < d.s; ++x) {
    for (std::size_t a = 0; a < k; ++a) {
      const std::string label = d.carrier.label(d.domain[a]) + "•" + std::to_string(x);
      const auto idx = d.space.find(label);
      if (!idx) fail_parse("suspension lacks point '" + label + "'");
      out[x * k + a] = *idx;
    }
  }
  return out;
}

void plan_suspension_core(Plan& plan, std::shared_ptr<const SuspensionData> d, bool check_preconditions) {
  const std::size_t k = d->domain.size();
  if (check_preconditions) {
    plan.add("carrier metric axioms", [d] { return metric_witness(d->carrier); });
  }
  plan.add("suspension preconditions", [d, k]() -> Witness {
    if (k == 0) return std::nullopt;
    if (d->s < 3) return "s = " + std::to_string(d->s) + " < 3";
    if (injective_witness(d->domain, Labels(k, "A"), d->carrier.points())) return std::string("domain repeats a point");
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (d->carrier.d(d->f[a], d->f[b]) != d_of(*d, a, b)) {
          return "f does not preserve d(" + q(d->carrier.label(d->domain[a])) + ", " + q(d->carrier.label(d->domain[b])) + ")";
        }
      }
    }
    std::optional<Rational> delta;
    Rational diam(0);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const Rational v = d_f_of(*d, a, b);
        if (!delta || v < *delta) delta = v;
        diam = max(diam, max(v, max(d_of(*d, a, b), d->carrier.d(d->f[a], d->f[b]))));
      }
    }
    if (delta->sign() <= 0) return std::string("zero separation");
    if (*delta * Rational(static_cast<std::int64_t>(d->s) - 2) < diam) {
      return "delta*(s-2) = " + (*delta * Rational(static_cast<std::int64_t>(d->s) - 2)).str() + " < diameter " + diam.str();
    }
    return std::nullopt;
  });
  plan.add("D equals shortest paths of the step graph", [d, k]() -> Witness {
    WeightedGraph g;
    g.vertices.resize(k * d->s);
    for (std::size_t x = 0; x < d->s; ++x) {
      const std::size_t nx = (x + 1) % d->s;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a < b) g.add_edge(x * k + a, x * k + b, d_of(*d, a, b));
          g.add_edge(x * k + a, nx * k + b, d_f_of(*d, a, b));
        }
      }
    }
    const auto apsp = all_pairs_shortest_paths(g);
    for (std::size_t u = 0; u < g.size(); ++u) {
      for (std::size_t v = 0; v < g.size(); ++v) {
        const Rational& stored = d->space.d(d->point[u], d->point[v]);
        if (!apsp[u][v] || *apsp[u][v] != stored) {
          return "D(" + q(d->space.label(d->point[u])) + ", " + q(d->space.label(d->point[v])) + ") = " + stored.str() +
                 ", shortest path " + (apsp[u][v] ? apsp[u][v]->str() : "none");
        }
      }
    }
    return std::nullopt;
  });
  plan.add("D restricts to d on each level", [d, k]() -> Witness {
    for (std::size_t x = 0; x < d->s; ++x) {
      const std::size_t nx = (x + 1) % d->s;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (d->space.d(d->point[x * k + a], d->point[x * k + b]) != d_of(*d, a, b)) {
            return "D(" + q(d->space.label(d->point[x * k + a])) + ", " + q(d->space.label(d->point[x * k + b])) + ") differs from d";
          }
          if (d->space.d(d->point[x * k + a], d->point[nx * k + b]) != d_f_of(*d, a, b)) {
            return "D(" + q(d->space.label(d->point[x * k + a])) + ", " + q(d->space.label(d->point[nx * k + b])) + ") differs from d(a, f(b))";
          }
        }
      }
    }
    return std::nullopt;
  });
  plan.add("suspension metric axioms", [d] { return metric_witness(d->space); });
  plan.add("shift moves every point one step", [d, k]() -> Witness {
    for (std::size_t x = 0; x < d->s; ++x) {
      for (std::size_t a = 0; a < k; ++a) {
        const std::size_t from = d->point[x * k + a];
        const std::size_t to = d->point[((x + 1) % d->s) * k + a];
        if (d->shift[from] != to) return "shift(" + q(d->space.label(from)) + ") = " + q(d->space.label(d->shift[from]));
      }
    }
    return std::nullopt;
  });
  plan.add("shift is an isometry", [d]() -> Witness {
    if (auto w = injective_witness(d->shift, d->space.points(), d->space.points())) return w;
    return preserves_witness(d->space, d->space, d->shift);
  });
  plan.add("shift^s is the identity", [d]() -> Witness {
    const Fn p = power_fn(d->shift, d->s);
    return agree_witness(p, identity_fn(p.size()), d->space.points(), d->space.points());
  });
}

void plan_suspension(Plan& plan, const Json& j) {
  auto d = std::make_shared<SuspensionData>();
  d->carrier = space_from_json(field(j, "carrier"));
  const Json& domain = field(j, "domain");
  if (!domain.is_array()) fail_parse("domain must be an array of labels");
  Labels dom;
  for (const auto& v : domain) {
    if (!v.is_string() || !d->carrier.find(v.get<std::string>())) fail_parse("domain names an unknown point");
    dom.push_back(v.get<std::string>());
    d->domain.push_back(*d->carrier.find(dom.back()));
  }
  d->f = map_from_json(field(j, "f"), dom, d->carrier.points());
  d->s = count_field(j, "s");
  if (d->s == 0) fail_parse("s must be positive");
  d->space = space_from_json(field(j, "space"));
  d->shift = map_from_json(field(j, "shift"), d->space.points(), d->space.points());
  d->point = locate_suspension_points(*d);
  plan_suspension_core(plan, d, true);
}

void plan_rohlin(Plan& plan, const Json& j) {
  struct Data {
    FiniteMetricSpace input;
    Labels domain_labels;
    Fn domain, h;
    Rational epsilon, delta;
    PeriodSet periods;
    FiniteMetricSpace separated;
    std::size_t s;
    Fn f;  // A → separated
    std::shared_ptr<SuspensionData> susp;
    std::vector<std::pair<std::string, std::string>> identification;
  };
  auto d = std::make_shared<Data>();
  d->input = space_from_json(field(j, "space"));
  const Json& domain = field(j, "domain");
  if (!domain.is_array()) fail_parse("domain must be an array of labels");
  for (const auto& v : domain) {
    if (!v.is_string() || !d->input.find(v.get<std::string>())) fail_parse("domain names an unknown point");
    d->domain_labels.push_back(v.get<std::string>());
    d->domain.push_back(*d->input.find(d->domain_labels.back()));
  }
  d->h = map_from_json(field(j, "h"), d->domain_labels, d->input.points());
  d->epsilon = rational_from_json(field(j, "epsilon"));
  d->delta = rational_from_json(field(j, "delta"));
  d->periods = period_set_from_json(field(j, "periods"));
  d->separated = space_from_json(field(j, "separated"));
  d->s = count_field(j, "s");
  if (d->s == 0) fail_parse("s must be positive");
  // The domain inside the separated space keeps its labels.
  Fn sep_domain;
  for (const auto& l : d->domain_labels) {
    const auto idx = d->separated.find(l);
    if (!idx) fail_parse("separated space lacks '" + l + "'");
    sep_domain.push_back(*idx);
  }
  d->f = map_from_json(field(j, "f"), d->domain_labels, d->separated.points());
  const Json& susp = field(j, "suspension");
  auto sd = std::make_shared<SuspensionData>();
  sd->carrier = d->separated;
  sd->domain = sep_domain;
  sd->f = d->f;
  sd->s = d->s;
  sd->space = space_from_json(field(susp, "space"));
  sd->shift = map_from_json(field(susp, "shift"), sd->space.points(), sd->space.points());
  sd->point = locate_suspension_points(*sd);
  d->susp = sd;
  const Json& ident = field(j, "identification");
  if (!ident.is_object()) fail_parse("identification must be an object");
  for (const auto& [key, value] : ident.items()) {
    if (!value.is_string()) fail_parse("identification values are labels");
    d->identification.emplace_back(key, value.get<std::string>());
  }

  const std::size_t k = d->domain.size();
  plan.add("input metric axioms", [d] { return metric_witness(d->input); });
  plan.add("h preserves distances on A", [d, k]() -> Witness {
    if (injective_witness(d->domain, d->domain_labels, d->input.points())) return std::string("domain repeats a point");
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (d->input.d(d->h[a], d->h[b]) != d->input.d(d->domain[a], d->domain[b])) {
          return "h distorts d(" + q(d->domain_labels[a]) + ", " + q(d->domain_labels[b]) + ")";
        }
      }
    }
    return std::nullopt;
  });
  plan.add("delta is 3/4 of epsilon", [d]() -> Witness {
    if (d->epsilon.sign() <= 0) return "epsilon = " + d->epsilon.str();
    if (d->delta != d->epsilon * Rational(3, 4)) return "delta = " + d->delta.str() + ", epsilon = " + d->epsilon.str();
    return std::nullopt;
  });
  plan.add("separated space is the l1 product", [d, k]() -> Witness {
    // B = A ∪ h[A] in input order, then B × {δ} as "<b>*".
    std::vector<bool> used(d->input.size(), false);
    for (std::size_t a = 0; a < k; ++a) used[d->domain[a]] = used[d->h[a]] = true;
    Fn b_points;
    for (std::size_t p = 0; p < d->input.size(); ++p) {
      if (used[p]) b_points.push_back(p);
    }
    const std::size_t m = b_points.size();
    if (d->separated.size() != 2 * m) return std::to_string(d->separated.size()) + " points, expected " + std::to_string(2 * m);
    for (std::size_t u = 0; u < 2 * m; ++u) {
      const std::string expected = d->input.label(b_points[u % m]) + (u < m ? "" : "*");
      if (d->separated.label(u) != expected) return "point " + std::to_string(u) + " is " + q(d->separated.label(u)) + ", expected " + q(expected);
      for (std::size_t v = 0; v < 2 * m; ++v) {
        Rational e = d->input.d(b_points[u % m], b_points[v % m]);
        if ((u < m) != (v < m)) e += d->delta;
        if (d->separated.d(u, v) != e) return "d(" + q(d->separated.label(u)) + ", " + q(d->separated.label(v)) + ") should be " + e.str();
      }
    }
    return std::nullopt;
  });
  plan.add("f lifts h", [d, k]() -> Witness {
    for (std::size_t a = 0; a < k; ++a) {
      const std::string expected = d->input.label(d->h[a]) + "*";
      if (d->separated.label(d->f[a]) != expected) return "f(" + q(d->domain_labels[a]) + ") = " + q(d->separated.label(d->f[a]));
    }
    return std::nullopt;
  });
  plan.add("separation inequalities", [d, k]() -> Witness {
    for (std::size_t a = 0; a < k; ++a) {
      const auto h_in_sep = d->separated.find(d->input.label(d->h[a]));
      if (!h_in_sep) return "h(" + q(d->domain_labels[a]) + ") missing from the separated space";
      const Rational close = d->separated.d(d->f[a], *h_in_sep);
      if (!(close <= d->delta && d->delta < d->epsilon)) return "d(f(" + q(d->domain_labels[a]) + "), h(" + q(d->domain_labels[a]) + ")) = " + close.str();
    }
    const Rational half = d->epsilon / Rational(2);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const auto ai = d->separated.find(d->domain_labels[a]);
        const Rational far = d->separated.d(*ai, d->f[b]);
        if (!(far >= d->delta && d->delta > half)) return "d(" + q(d->domain_labels[a]) + ", f(" + q(d->domain_labels[b]) + ")) = " + far.str();
      }
    }
    return std::nullopt;
  });
  plan.add("s is the least admissible period", [d, k]() -> Witness {
    if (!d->periods.contains(d->s)) return "s = " + std::to_string(d->s) + " is not in {" + d->periods.str() + "}";
    if (k == 0) {
      if (d->s != d->periods.min()) return "empty domain should use the least period";
      return std::nullopt;
    }
    std::optional<Rational> delta;
    Rational diam(0);
    const auto& sep = d->separated;
    std::vector<std::size_t> pts;
    for (const auto& l : d->domain_labels) pts.push_back(*sep.find(l));
    pts.insert(pts.end(), d->f.begin(), d->f.end());
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const Rational v = sep.d(pts[a], d->f[b]);
        if (!delta || v < *delta) delta = v;
      }
    }
    for (const auto u : pts) {
      for (const auto v : pts) diam = max(diam, sep.d(u, v));
    }
    auto admissible = [&](std::size_t s) { return s >= 3 && *delta * Rational(static_cast<std::int64_t>(s) - 2) >= diam; };
    if (!admissible(d->s)) return "s = " + std::to_string(d->s) + " fails delta*(s-2) >= diameter";
    for (std::size_t t = 1; t < d->s; ++t) {
      if (d->periods.contains(t) && admissible(t)) return "smaller admissible period " + std::to_string(t);
    }
    return std::nullopt;
  });
  plan_suspension_core(plan, sd, false);
  plan.add("A and f[A] embed as two adjacent levels", [d, k]() -> Witness {
    const auto& sd = *d->susp;
    std::unordered_map<std::string, std::string> ident(d->identification.begin(), d->identification.end());
    Fn sources, targets;
    for (std::size_t a = 0; a < k; ++a) {
      for (const auto& [from, to] :
           {std::pair{d->domain_labels[a], sd.point[a]}, std::pair{d->separated.label(d->f[a]), sd.point[k + a]}}) {
        const auto it = ident.find(from);
        if (it == ident.end()) return "no image for " + q(from);
        if (it->second != sd.space.label(to)) return q(from) + " is sent to " + q(it->second) + ", expected " + q(sd.space.label(to));
        sources.push_back(*d->separated.find(from));
        targets.push_back(to);
      }
    }
    if (ident.size() != sources.size()) return std::string("identification has extra entries");
    for (std::size_t u = 0; u < sources.size(); ++u) {
      for (std::size_t v = 0; v < sources.size(); ++v) {
        if (sd.space.d(targets[u], targets[v]) != d->separated.d(sources[u], sources[v])) {
          return "identification distorts d(" + q(d->separated.label(sources[u])) + ", " + q(d->separated.label(sources[v])) + ")";
        }
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (sd.shift[targets[2 * a]] != targets[2 * a + 1]) return "g disagrees with f at " + q(d->domain_labels[a]);
    }
    return std::nullopt;
  });
}

Plan build_plan(const Json& blob, const std::string& kind) {
  Plan plan;
  if (kind == "algebra") plan_algebra(plan, blob);
  else if (kind == "inclusion") plan_inclusion(plan, blob);
  else if (kind == "automorphism") plan_automorphism(plan, blob);
  else if (kind == "space") plan_space(plan, blob);
  else if (kind == "isometry") plan_isometry(plan, blob);
  else if (kind == "embedding") plan_embedding(plan, blob);
  else if (kind == "algebra-amalgam") plan_algebra_amalgam(plan, blob);
  else if (kind == "metric-amalgam") plan_metric_amalgam(plan, blob);
  else if (kind == "algebra-root") plan_algebra_root(plan, blob);
  else if (kind == "metric-root") plan_metric_root(plan, blob);
  else if (kind == "algebra-pair-tower") plan_algebra_tower(plan, blob, true);
  else if (kind == "algebra-root-tower") plan_algebra_tower(plan, blob, false);
  else if (kind == "metric-pair-tower") plan_metric_tower(plan, blob, true);
  else if (kind == "metric-root-tower") plan_metric_tower(plan, blob, false);
  else if (kind == "qaction") plan_qaction(plan, blob);
  else if (kind == "suspension") plan_suspension(plan, blob);
  else if (kind == "rohlin") plan_rohlin(plan, blob);
  else fail_parse("unknown certificate kind '" + kind + "'");
  return plan;
}

std::vector<CheckResult> run_plan(const Plan& plan) {
  const std::size_t count = plan.fns.size();
  std::vector<CheckResult> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      CheckResult& r = results[i];
      r.name = plan.names[i];
      try {
        const Witness w = plan.fns[i]();
        r.passed = !w;
        if (w) r.witness = *w;
      } catch (const std::exception& e) {
        r.passed = false;
        r.witness = e.what();
      }
    }
  };
  const std::size_t threads = std::min(verification_threads(), count);
  if (threads <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace

std::size_t verification_threads() {
  if (const char* env = std::getenv("URYSOHN_FORGE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json VerificationReport::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) {
    Json entry{{"name", c.name}, {"pass", c.passed}};
    if (!c.passed) entry["witness"] = c.witness;
    checks_json.push_back(std::move(entry));
  }
  return Json{{"subject", subject},
              {"passed", passed()},
              {"checks", std::move(checks_json)},
              {"elapsed_ms", std::chrono::duration<double, std::milli>(elapsed).count()}};
}

std::string VerificationReport::text() const {
  std::ostringstream out;
  out << subject << ": " << (passed() ? "all checks passed" : "FAILED") << "\n";
  for (const auto& c : checks) {
    out << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
    if (!c.passed) out << ": " << c.witness;
    out << "\n";
  }
  return out.str();
}

VerificationReport verify_certificate(const nlohmann::json& blob) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.subject = infer_kind(blob);
  Plan plan;
  try {
    plan = build_plan(blob, report.subject);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    fail_parse(e.what());
  } catch (const nlohmann::json::exception& e) {
    fail_parse(e.what());
  }
  report.checks = run_plan(plan);
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace urysohn
