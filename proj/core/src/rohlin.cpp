#include "urysohn/rohlin.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "urysohn/error.hpp"

namespace urysohn {

Rational separation(const CarriedMap& f) {
  std::optional<Rational> best;
  for (std::size_t a = 0; a < f.size(); ++a) {
    for (std::size_t b = 0; b < f.size(); ++b) {
      if (!best || f.d_f(a, b) < *best) best = f.d_f(a, b);
    }
  }
  return best.value_or(Rational(0));
}

Rational spread(const CarriedMap& f) {
  std::vector<std::size_t> pts = f.domain;
  pts.insert(pts.end(), f.image.begin(), f.image.end());
  Rational best(0);
  for (const auto u : pts) {
    for (const auto v : pts) best = max(best, f.carrier.d(u, v));
  }
  return best;
}

bool isometric_on_domain(const CarriedMap& f) {
  for (std::size_t a = 0; a < f.size(); ++a) {
    for (std::size_t b = a + 1; b < f.size(); ++b) {
      if (f.d_ff(a, b) != f.d(a, b)) return false;
    }
  }
  return true;
}

SeparatedMap delta_separate(const FiniteMetricSpace& space, const std::vector<std::size_t>& domain,
                            const std::vector<std::size_t>& h, const Rational& delta) {
  if (delta.sign() <= 0) fail_precondition("delta must be positive, got " + delta.str());
  if (domain.size() != h.size()) fail_precondition("domain and h differ in size");
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] >= n || h[i] >= n) fail_precondition("point index out of range");
  }

  std::vector<std::string> labels = space.points();
  for (std::size_t b = 0; b < n; ++b) labels.push_back(space.label(b) + "*");
  std::vector<std::vector<Rational>> dist(2 * n, std::vector<Rational>(2 * n));
  for (std::size_t u = 0; u < 2 * n; ++u) {
    for (std::size_t v = 0; v < 2 * n; ++v) {
      dist[u][v] = space.d(u % n, v % n);
      if ((u < n) != (v < n)) dist[u][v] += delta;
    }
  }

  SeparatedMap out;
  out.carrier = FiniteMetricSpace(std::move(labels), std::move(dist));
  out.delta = delta;
  out.domain = domain;
  out.h_image = h;
  for (const auto y : h) out.image.push_back(n + y);
  return out;
}

int circular_move(const SuspensionContext& ctx, std::size_t x, std::size_t y) {
  if (x >= ctx.s || y >= ctx.s) fail_precondition("circular coordinate out of range");
  if (y == x) return 0;
  if (y == ctx.succ(x)) return 1;
  if (y == ctx.pred(x)) return -1;
  fail_precondition("path jumps from " + std::to_string(x) + " to " + std::to_string(y));
}

Rational rho(const SuspensionContext& ctx, PathPoint from, PathPoint to) {
  const auto& m = ctx.map;
  if (from.a >= m.size() || to.a >= m.size()) fail_precondition("path point outside A");
  switch (circular_move(ctx, from.x, to.x)) {
    case 0:
      return m.d(from.a, to.a);
    case 1:
      return m.d_f(from.a, to.a);
    default:
      return m.d_f(to.a, from.a);
  }
}

Rational path_length(const SuspensionContext& ctx, const Path& p) {
  if (p.size() < 2) fail_precondition("a path has at least two points");
  Rational total(0);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += rho(ctx, p[i], p[i + 1]);
  return total;
}

namespace {

bool monotone(const SuspensionContext& ctx, const Path& p, int direction) {
  if (p.size() < 2) return false;
  if (p.size() == 2 && p[0].x == p[1].x) return true;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (circular_move(ctx, p[i].x, p[i + 1].x) != direction) return false;
  }
  return true;
}

int rewrite_case(int first, int second) {
  if (first == 0 && second == 0) return 1;
  if (first == -1 && second == 0) return 2;
  if (first == 1 && second == 0) return 3;
  if (first == 1 && second == -1) return 4;
  if (first == -1 && second == 1) return 5;
  if (first == 0 && second == 1) return 6;
  if (first == 0 && second == -1) return 7;
  return 0;
}

}  // namespace

bool is_positive(const SuspensionContext& ctx, const Path& p) { return monotone(ctx, p, 1); }
bool is_negative(const SuspensionContext& ctx, const Path& p) { return monotone(ctx, p, -1); }

Path path_reduce(const SuspensionContext& ctx, Path p, std::vector<int>* cases) {
  if (p.size() < 2) fail_precondition("a path has at least two points");
  path_length(ctx, p);  // validates every step
  bool changed = true;
  while (changed && p.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i + 2 < p.size(); ++i) {
      const int c = rewrite_case(circular_move(ctx, p[i].x, p[i + 1].x), circular_move(ctx, p[i + 1].x, p[i + 2].x));
      if (c == 0) continue;
      if (cases) cases->push_back(c);
      p.erase(p.begin() + static_cast<std::ptrdiff_t>(i + 1));
      changed = true;
      break;
    }
  }
  return p;
}

WeightedGraph step_graph(const SuspensionContext& ctx) {
  const auto& m = ctx.map;
  const std::size_t k = m.size();
  WeightedGraph g;
  for (std::size_t x = 0; x < ctx.s; ++x) {
    for (std::size_t a = 0; a < k; ++a) g.vertices.push_back(m.label(a) + "•" + std::to_string(x));
  }
  for (std::size_t x = 0; x < ctx.s; ++x) {
    const std::size_t next = ctx.succ(x);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) g.add_edge(x * k + a, x * k + b, m.d(a, b));
      for (std::size_t b = 0; b < k; ++b) g.add_edge(x * k + a, next * k + b, m.d_f(a, b));
    }
  }
  return g;
}

SuspensionSpace circular_suspension(const CarriedMap& f, std::size_t s) {
  if (f.domain.size() != f.image.size()) fail_precondition("domain and image differ in size");
  SuspensionSpace out;
  out.context = SuspensionContext{f, s};
  if (f.size() == 0) {
    if (s == 0) fail_precondition("period must be positive");
    out.shift = Isometry::identity(FiniteMetricSpace());
    return out;
  }
  if (s < 3) fail_precondition("a circular suspension needs s >= 3, got " + std::to_string(s));
  if (!isometric_on_domain(f)) fail_precondition("f does not preserve distances on A");
  const Rational delta = separation(f);
  if (delta.is_zero()) fail_precondition("zero separation: some d(a, f(b)) vanishes");
  const Rational big_delta = spread(f);
  if (delta * Rational(static_cast<std::int64_t>(s) - 2) < big_delta) {
    fail_precondition("delta*(s-2) = " + (delta * Rational(static_cast<std::int64_t>(s) - 2)).str() +
                      " is below the diameter " + big_delta.str());
  }

  const auto graph = step_graph(out.context);
  const std::size_t total = graph.size();
  std::vector<std::vector<Rational>> dist(total, std::vector<Rational>(total));
  for (std::size_t u = 0; u < total; ++u) {
    const auto row = single_source_shortest_paths(graph, u);
    for (std::size_t v = 0; v < total; ++v) {
      if (!row[v]) fail_internal("step graph is disconnected");
      dist[u][v] = *row[v];
    }
  }
  out.space = FiniteMetricSpace(graph.vertices, std::move(dist));

  const std::size_t k = f.size();
  for (std::size_t x = 0; x < s; ++x) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (out.space.d(out.point(a, x), out.point(b, x)) != f.d(a, b) ||
            out.space.d(out.point(a, x), out.point(b, out.context.succ(x))) != f.d_f(a, b)) {
          fail_internal("suspension distorts the distances of A near '" + f.label(a) + "'");
        }
      }
    }
  }
  std::vector<std::size_t> image(total);
  for (std::size_t x = 0; x < s; ++x) {
    for (std::size_t a = 0; a < k; ++a) image[out.point(a, x)] = out.point(a, out.context.succ(x));
  }
  out.shift = Isometry(out.space, Permutation(std::move(image)));
  return out;
}

PeriodSet PeriodSet::list(std::vector<std::size_t> values) {
  if (values.empty()) fail_precondition("empty period set");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() == 0) fail_precondition("periods must be positive");
  PeriodSet p;
  p.values_ = std::move(values);
  return p;
}

PeriodSet PeriodSet::progression(std::size_t start, std::size_t step) {
  if (start == 0 || step == 0) fail_precondition("progression start and step must be positive");
  PeriodSet p;
  p.progression_ = true;
  p.start_ = start;
  p.step_ = step;
  return p;
}

PeriodSet PeriodSet::parse(const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    const auto first = tok.find_first_not_of(" \t");
    const auto last = tok.find_last_not_of(" \t");
    tokens.push_back(first == std::string::npos ? "" : tok.substr(first, last - first + 1));
  }
  bool open = false;
  if (!tokens.empty() && (tokens.back() == "…" || tokens.back() == "...")) {
    open = true;
    tokens.pop_back();
  }
  std::vector<std::size_t> values;
  for (const auto& tok : tokens) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || v == 0) {
      fail_parse("bad period '" + tok + "' in \"" + text + "\"");
    }
    values.push_back(v);
  }
  if (values.empty()) fail_parse("no periods in \"" + text + "\"");
  if (!open) return list(std::move(values));
  if (values.size() == 1) return multiples_of(values[0]);
  if (values[1] <= values[0]) fail_parse("progression must increase: \"" + text + "\"");
  const std::size_t step = values[1] - values[0];
  for (std::size_t i = 2; i < values.size(); ++i) {
    if (values[i] != values[0] + i * step) fail_parse("not an arithmetic progression: \"" + text + "\"");
  }
  return progression(values[0], step);
}

bool PeriodSet::contains(std::size_t s) const {
  if (progression_) return s >= start_ && (s - start_) % step_ == 0;
  return std::binary_search(values_.begin(), values_.end(), s);
}

std::size_t PeriodSet::min() const { return progression_ ? start_ : values_.front(); }

std::optional<std::size_t> PeriodSet::least_at_least(std::size_t lower) const {
  if (progression_) {
    if (lower <= start_) return start_;
    return start_ + (lower - start_ + step_ - 1) / step_ * step_;
  }
  const auto it = std::lower_bound(values_.begin(), values_.end(), lower);
  if (it == values_.end()) return std::nullopt;
  return *it;
}

std::string PeriodSet::str() const {
  std::string out;
  if (progression_) return std::to_string(start_) + "," + std::to_string(start_ + step_) + ",...";
  for (std::size_t i = 0; i < values_.size(); ++i) out += (i ? "," : "") + std::to_string(values_[i]);
  return out;
}

RohlinResult rohlin_approximation(const FiniteMetricSpace& space, const std::vector<std::size_t>& domain,
                                  const std::vector<std::size_t>& h, const Rational& epsilon, const PeriodSet& periods) {
  if (epsilon.sign() <= 0) fail_precondition("epsilon must be positive, got " + epsilon.str());
  if (domain.size() != h.size()) fail_precondition("domain and h differ in size");
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] >= space.size() || h[i] >= space.size()) fail_precondition("point index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (domain[i] == domain[j]) fail_precondition("point '" + space.label(domain[i]) + "' listed twice");
      if (space.d(h[i], h[j]) != space.d(domain[i], domain[j])) {
        fail_precondition("h does not preserve d('" + space.label(domain[j]) + "', '" + space.label(domain[i]) + "')");
      }
    }
  }

  RohlinResult out;
  out.epsilon = epsilon;
  // B = A ∪ h[A], as a subspace in input order.
  std::vector<bool> used(space.size(), false);
  for (std::size_t i = 0; i < domain.size(); ++i) used[domain[i]] = used[h[i]] = true;
  std::vector<std::size_t> local(space.size());
  for (std::size_t p = 0; p < space.size(); ++p) {
    if (!used[p]) continue;
    local[p] = out.base_points.size();
    out.base_points.push_back(p);
  }
  std::vector<std::size_t> dom, img;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    dom.push_back(local[domain[i]]);
    img.push_back(local[h[i]]);
  }
  out.separated = delta_separate(space.restrict_to(out.base_points), dom, img, epsilon * Rational(3, 4));

  if (domain.empty()) {
    out.s = periods.min();
    out.suspension = circular_suspension(out.separated, out.s);
    return out;
  }

  const Rational delta = separation(out.separated);
  const Rational ratio = spread(out.separated) / delta;
  mpz_class lift;
  mpz_cdiv_q(lift.get_mpz_t(), ratio.numerator().get_mpz_t(), ratio.denominator().get_mpz_t());
  if (!lift.fits_ulong_p() || lift.get_ui() > (std::size_t{1} << 40)) fail_precondition("required period is too large");
  const std::size_t lower = std::max<std::size_t>(3, 2 + lift.get_ui());
  const auto s = periods.least_at_least(lower);
  if (!s) fail_precondition("no admissible period >= " + std::to_string(lower) + " in {" + periods.str() + "}");
  out.s = *s;
  out.suspension = circular_suspension(out.separated, out.s);
  for (std::size_t a = 0; a < domain.size(); ++a) {
    out.domain_in_suspension.push_back(out.suspension.point(a, 0));
    out.image_in_suspension.push_back(out.suspension.point(a, 1));
  }
  return out;
}

}  // namespace urysohn
