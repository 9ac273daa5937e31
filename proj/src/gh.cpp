#include "metriclab/gh.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace metriclab {

namespace {

constexpr const char* kModule = "gh_solver";
constexpr double kInf = std::numeric_limits<double>::infinity();

using BasePair = std::optional<std::pair<std::size_t, std::size_t>>;

/// A full correspondence in normal form: graph(f) union transpose(graph(g)).
/// Every full correspondence contains one of these with no larger
/// distortion, so searching over (f, g) pairs loses nothing.
struct Maps {
    std::vector<std::size_t> f;  // X -> Y
    std::vector<std::size_t> g;  // Y -> X
};

Correspondence to_correspondence(const Maps& maps) {
    Correspondence r;
    r.pairs.reserve(maps.f.size() + maps.g.size());
    for (std::size_t x = 0; x < maps.f.size(); ++x) r.pairs.emplace_back(x, maps.f[x]);
    for (std::size_t y = 0; y < maps.g.size(); ++y) r.pairs.emplace_back(maps.g[y], y);
    std::sort(r.pairs.begin(), r.pairs.end());
    r.pairs.erase(std::unique(r.pairs.begin(), r.pairs.end()), r.pairs.end());
    return r;
}

double pairs_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    double worst = 0.0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
        auto xr = x.row(pairs[e].first);
        auto yr = y.row(pairs[e].second);
        for (std::size_t e2 = e + 1; e2 < pairs.size(); ++e2) {
            worst = std::max(worst, std::abs(xr[pairs[e2].first] - yr[pairs[e2].second]));
        }
    }
    return worst;
}

double maps_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Maps& maps) {
    return pairs_distortion(x, y, to_correspondence(maps).pairs);
}

// Hausdorff distance between two sorted sequences of reals.
double sorted_hausdorff(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return (a.empty() && b.empty()) ? 0.0 : kInf;
    auto one_sided = [](std::span<const double> from, std::span<const double> to) {
        double worst = 0.0;
        std::size_t k = 0;
        for (double v : from) {
            while (k + 1 < to.size() && to[k + 1] <= v) ++k;
            double d = std::abs(v - to[k]);
            if (k + 1 < to.size()) d = std::min(d, std::abs(to[k + 1] - v));
            worst = std::max(worst, d);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

std::vector<double> sorted_row(const FiniteMetricSpace& m, std::size_t i) {
    std::vector<double> r(m.row(i).begin(), m.row(i).end());
    std::sort(r.begin(), r.end());
    return r;
}

// Half the Hausdorff distance between the sets of distance values. For large
// spaces values are bucketed; the bucket width is subtracted so the bound
// stays valid.
double value_set_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    if (nx * nx + ny * ny <= 2e7) {
        auto values = [](const FiniteMetricSpace& m) {
            std::vector<double> v(m.data().begin(), m.data().end());
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        return 0.5 * sorted_hausdorff(values(x), values(y));
    }
    const double top = std::max(x.diameter(), y.diameter());
    if (top <= 0.0) return 0.0;
    constexpr std::size_t kBuckets = 1u << 20;
    const double width = top / static_cast<double>(kBuckets - 1);
    auto buckets = [&](const FiniteMetricSpace& m) {
        std::vector<char> hit(kBuckets, 0);
        for (double v : m.data()) hit[std::min(kBuckets - 1, static_cast<std::size_t>(v / width))] = 1;
        std::vector<double> centres;
        for (std::size_t b = 0; b < kBuckets; ++b) {
            if (hit[b]) centres.push_back(static_cast<double>(b) * width);
        }
        return centres;
    };
    double d = sorted_hausdorff(buckets(x), buckets(y)) - width;
    return std::max(0.0, 0.5 * d);
}

double row_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    std::vector<std::vector<double>> xr(x.size()), yr(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) xr[i] = sorted_row(x, i);
    for (std::size_t j = 0; j < y.size(); ++j) yr[j] = sorted_row(y, j);
    std::vector<double> best_x(x.size(), kInf), best_y(y.size(), kInf);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            double d = sorted_hausdorff(xr[i], yr[j]);
            best_x[i] = std::min(best_x[i], d);
            best_y[j] = std::min(best_y[j], d);
        }
    }
    double worst = 0.0;
    for (double v : best_x) worst = std::max(worst, v);
    for (double v : best_y) worst = std::max(worst, v);
    return 0.5 * worst;
}

// Canonical argument order so results are identical under swapping.
bool should_swap(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    auto a = x.data(), b = y.data();
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void require_nonempty(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    if (x.empty() || y.empty()) fail(ErrorKind::domain, kModule, "Gromov-Hausdorff distance of an empty space");
}

// ---------------------------------------------------------------------------
// Branch and bound

class BranchAndBound {
public:
    BranchAndBound(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base,
                   std::uint64_t budget, double incumbent, Maps incumbent_maps)
        : x_(x), y_(y), n_(x.size()), m_(y.size()), budget_(budget), best_(incumbent),
          best_maps_(std::move(incumbent_maps)) {
        f_.assign(n_, kUnset);
        g_.assign(m_, kUnset);
        cost_.assign(n_ * m_, 0.0);

        struct Ranked {
            double ecc;
            std::size_t index;
            bool is_x;
        };
        std::vector<Ranked> ranked;
        for (std::size_t i = 0; i < n_; ++i) ranked.push_back({x.eccentricity(i), i, true});
        for (std::size_t j = 0; j < m_; ++j) ranked.push_back({y.eccentricity(j), j, false});
        std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
            if (a.ecc != b.ecc) return a.ecc > b.ecc;
            if (a.index != b.index) return a.index < b.index;
            return a.is_x && !b.is_x;
        });

        double start = 0.0;
        if (base) {
            f_[base->first] = base->second;
            g_[base->second] = base->first;
            add_pair(base->first, base->second);
        }
        for (const auto& r : ranked) {
            if (base && ((r.is_x && r.index == base->first) || (!r.is_x && r.index == base->second))) continue;
            order_.push_back({r.is_x, r.index});
        }
        saved_.resize(order_.size() + 1);
        start_distortion_ = start;
    }

    bool run() {
        search(0, start_distortion_);
        return !aborted_;
    }

    double best() const { return best_; }
    const Maps& best_maps() const { return best_maps_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    struct Var {
        bool is_x;
        std::size_t index;
    };

    double pair_cost(const Var& v, std::size_t c) const {
        return v.is_x ? cost_[v.index * m_ + c] : cost_[c * m_ + v.index];
    }

    void add_pair(std::size_t a, std::size_t b) {
        auto xa = x_.row(a);
        auto yb = y_.row(b);
        for (std::size_t i = 0; i < n_; ++i) {
            double* row = cost_.data() + i * m_;
            const double dx = xa[i];
            for (std::size_t j = 0; j < m_; ++j) row[j] = std::max(row[j], std::abs(dx - yb[j]));
        }
    }

    double lookahead(std::size_t depth) const {
        double bound = 0.0;
        for (std::size_t k = depth; k < order_.size(); ++k) {
            const Var& v = order_[k];
            const std::size_t width = v.is_x ? m_ : n_;
            double low = kInf;
            for (std::size_t c = 0; c < width && low > bound; ++c) low = std::min(low, pair_cost(v, c));
            bound = std::max(bound, low);
        }
        return bound;
    }

    void search(std::size_t depth, double partial) {
        if (depth == order_.size()) {
            if (partial < best_) {
                best_ = partial;
                best_maps_ = Maps{f_, g_};
            }
            return;
        }
        const Var v = order_[depth];
        const std::size_t width = v.is_x ? m_ : n_;
        std::vector<std::pair<double, std::size_t>> candidates;
        candidates.reserve(width);
        for (std::size_t c = 0; c < width; ++c) candidates.emplace_back(pair_cost(v, c), c);
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        for (const auto& [cost, c] : candidates) {
            const double next = std::max(partial, cost);
            if (next >= best_) break;
            if (++nodes_ > budget_) {
                aborted_ = true;
                return;
            }
            saved_[depth] = cost_;
            const std::size_t a = v.is_x ? v.index : c;
            const std::size_t b = v.is_x ? c : v.index;
            add_pair(a, b);
            if (std::max(next, lookahead(depth + 1)) < best_) {
                (v.is_x ? f_[v.index] : g_[v.index]) = c;
                search(depth + 1, next);
                (v.is_x ? f_[v.index] : g_[v.index]) = kUnset;
            }
            cost_.swap(saved_[depth]);
            if (aborted_) return;
        }
    }

    const FiniteMetricSpace& x_;
    const FiniteMetricSpace& y_;
    std::size_t n_, m_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    double best_;
    Maps best_maps_;
    double start_distortion_ = 0.0;
    std::vector<Var> order_;
    std::vector<std::size_t> f_, g_;
    std::vector<double> cost_;
    std::vector<std::vector<double>> saved_;
};

// ---------------------------------------------------------------------------
// Upper-bound heuristics

/// Local search over the (f, g) normal form. Entries 0..n-1 are (x, f(x)),
/// entries n..n+m-1 are (g(y), y). The objective is the pair
/// (distortion, number of entry pairs attaining it), decreased
/// lexicographically by reassigning or swapping images of critical entries.
class LocalSearch {
public:
    LocalSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base, Maps maps,
                double ops_limit = kInf)
        : x_(x), y_(y), n_(x.size()), m_(y.size()), e_(n_ + m_), base_(base), maps_(std::move(maps)),
          ops_limit_(ops_limit) {
        contrib_.assign(e_ * e_, 0.0);
        for (std::size_t e = 0; e < e_; ++e) refresh_row(e);
        recount();
    }

    void run(std::size_t max_moves = 100000) {
        for (std::size_t move = 0; move < max_moves && worst_ > 0.0 && ops_ < ops_limit_; ++move) {
            if (!try_reassign() && !try_swap()) break;
        }
    }

    double distortion() const { return worst_; }
    const Maps& maps() const { return maps_; }

private:
    std::pair<std::size_t, std::size_t> entry(std::size_t e) const {
        return e < n_ ? std::pair{e, maps_.f[e]} : std::pair{maps_.g[e - n_], e - n_};
    }

    bool movable(std::size_t e) const {
        if (!base_) return true;
        return e < n_ ? e != base_->first : (e - n_) != base_->second;
    }

    double contribution(std::size_t a, std::size_t b, std::size_t e2) const {
        auto [a2, b2] = entry(e2);
        return std::abs(x_(a, a2) - y_(b, b2));
    }

    void refresh_row(std::size_t e) {
        ops_ += static_cast<double>(e_);
        auto [a, b] = entry(e);
        for (std::size_t e2 = 0; e2 < e_; ++e2) {
            double c = e2 == e ? 0.0 : contribution(a, b, e2);
            contrib_[e * e_ + e2] = c;
            contrib_[e2 * e_ + e] = c;
        }
    }

    void recount() {
        ops_ += 2.0 * static_cast<double>(e_) * static_cast<double>(e_);
        worst_ = 0.0;
        for (double c : contrib_) worst_ = std::max(worst_, c);
        critical_.assign(e_, 0);
        if (worst_ <= 0.0) return;
        for (std::size_t e = 0; e < e_; ++e) {
            for (std::size_t e2 = 0; e2 < e_; ++e2) {
                if (contrib_[e * e_ + e2] == worst_) ++critical_[e];
            }
        }
    }

    // Largest contribution of the candidate entry (a, b) against all entries
    // except the listed ones; stops early once `limit` is reached.
    double candidate_row_max(std::size_t a, std::size_t b, std::size_t skip1, std::size_t skip2,
                             double limit) const {
        double worst = 0.0;
        std::size_t e2 = 0;
        for (; e2 < e_ && worst < limit; ++e2) {
            if (e2 == skip1 || e2 == skip2) continue;
            worst = std::max(worst, contribution(a, b, e2));
        }
        ops_ += static_cast<double>(e2);
        return worst;
    }

    void set_target(std::size_t e, std::size_t target) {
        if (e < n_) {
            maps_.f[e] = target;
        } else {
            maps_.g[e - n_] = target;
        }
    }

    bool try_reassign() {
        for (std::size_t e = 0; e < e_; ++e) {
            if (critical_[e] == 0 || !movable(e)) continue;
            const bool is_f = e < n_;
            const std::size_t width = is_f ? m_ : n_;
            const std::size_t current = is_f ? maps_.f[e] : maps_.g[e - n_];
            double best = worst_;
            std::size_t best_target = current;
            for (std::size_t t = 0; t < width; ++t) {
                if (t == current) continue;
                const std::size_t a = is_f ? e : t;
                const std::size_t b = is_f ? t : e - n_;
                double row = candidate_row_max(a, b, e, e, best);
                if (row < best) {
                    best = row;
                    best_target = t;
                }
            }
            if (best_target != current) {
                set_target(e, best_target);
                refresh_row(e);
                recount();
                return true;
            }
        }
        return false;
    }

    bool try_swap() {
        for (std::size_t e = 0; e < e_; ++e) {
            if (critical_[e] == 0 || !movable(e)) continue;
            const bool is_f = e < n_;
            const std::size_t lo = is_f ? 0 : n_;
            const std::size_t hi = is_f ? n_ : e_;
            for (std::size_t e2 = lo; e2 < hi; ++e2) {
                if (e2 == e || !movable(e2)) continue;
                auto [a1, b1] = entry(e);
                auto [a2, b2] = entry(e2);
                // swapped entries
                std::size_t na1 = is_f ? a1 : a2, nb1 = is_f ? b2 : b1;
                std::size_t na2 = is_f ? a2 : a1, nb2 = is_f ? b1 : b2;
                if (std::abs(x_(na1, na2) - y_(nb1, nb2)) >= worst_) continue;
                if (candidate_row_max(na1, nb1, e, e2, worst_) >= worst_) continue;
                if (candidate_row_max(na2, nb2, e, e2, worst_) >= worst_) continue;
                set_target(e, is_f ? nb1 : na1);
                set_target(e2, is_f ? nb2 : na2);
                refresh_row(e);
                refresh_row(e2);
                recount();
                return true;
            }
        }
        return false;
    }

    const FiniteMetricSpace& x_;
    const FiniteMetricSpace& y_;
    std::size_t n_, m_, e_;
    BasePair base_;
    Maps maps_;
    std::vector<double> contrib_;
    std::vector<std::size_t> critical_;
    double worst_ = 0.0;
    double ops_limit_;
    mutable double ops_ = 0.0;
};

std::vector<std::size_t> farthest_points(const FiniteMetricSpace& m, std::size_t start, std::size_t k) {
    std::vector<std::size_t> chosen{start};
    std::vector<double> nearest(m.row(start).begin(), m.row(start).end());
    while (chosen.size() < std::min(k, m.size())) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < m.size(); ++i) {
            if (nearest[i] > nearest[far]) far = i;
        }
        if (nearest[far] <= 0.0) break;
        chosen.push_back(far);
        auto r = m.row(far);
        for (std::size_t i = 0; i < m.size(); ++i) nearest[i] = std::min(nearest[i], r[i]);
    }
    return chosen;
}

std::vector<std::size_t> nearest_profile_map(const FiniteMetricSpace& from, const FiniteMetricSpace& to,
                                             const std::vector<std::pair<std::size_t, std::size_t>>& anchors) {
    // anchors: (index in `from`, index in `to`)
    std::vector<std::size_t> out(from.size());
    std::vector<double> cost(to.size());
    for (std::size_t p = 0; p < from.size(); ++p) {
        std::fill(cost.begin(), cost.end(), 0.0);
        for (const auto& [a, b] : anchors) {
            const double dp = from(p, a);
            auto rb = to.row(b);
            for (std::size_t q = 0; q < to.size(); ++q) cost[q] = std::max(cost[q], std::abs(dp - rb[q]));
        }
        out[p] = static_cast<std::size_t>(std::min_element(cost.begin(), cost.end()) - cost.begin());
    }
    return out;
}

Maps landmark_seed(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base,
                   std::size_t start_x, std::size_t start_y, std::size_t k) {
    auto lx = farthest_points(x, start_x, k);
    auto ly = farthest_points(y, start_y, k);
    auto sx = x.subspace(lx);
    auto sy = y.subspace(ly);
    // landmark 0 is the start point, so a base pair stays at (0, 0)
    const BasePair small_base = base ? BasePair(std::pair<std::size_t, std::size_t>{0, 0}) : std::nullopt;
    Maps constant{std::vector<std::size_t>(sx.size(), 0), std::vector<std::size_t>(sy.size(), 0)};
    BranchAndBound bb(sx, sy, small_base, 200000, maps_distortion(sx, sy, constant), constant);
    bb.run();
    std::vector<std::pair<std::size_t, std::size_t>> anchors;
    for (const auto& [i, j] : to_correspondence(bb.best_maps()).pairs) anchors.emplace_back(lx[i], ly[j]);

    Maps maps;
    maps.f = nearest_profile_map(x, y, anchors);
    std::vector<std::pair<std::size_t, std::size_t>> reversed;
    for (const auto& [a, b] : anchors) reversed.emplace_back(b, a);
    maps.g = nearest_profile_map(y, x, reversed);
    if (base) {
        maps.f[base->first] = base->second;
        maps.g[base->second] = base->first;
    }
    return maps;
}

struct Candidate {
    double distortion = kInf;
    Maps maps;
};

Candidate heuristic_upper(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base,
                          const GhOptions& options) {
    const std::size_t n = x.size(), m = y.size();
    const double e = static_cast<double>(n + m);
    const bool small = n * m <= 400;
    const bool searchable = n + m <= 2048;
    const std::size_t k = std::min<std::size_t>({6, n, m});

    const double seed_cost = 2.0 * static_cast<double>(n) * static_cast<double>(m) * static_cast<double>(k) + e * e;
    const double search_cost = searchable ? 100.0 * e * e : 0.0;
    int restarts = std::max(1, options.restarts);
    restarts = static_cast<int>(std::clamp(options.work_budget / (seed_cost + search_cost), 1.0,
                                           static_cast<double>(restarts)));
    if (!searchable) restarts = std::min(restarts, 4);

    auto ecc_closest = [&](double target) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < m; ++j) {
            if (std::abs(y.eccentricity(j) - target) < std::abs(y.eccentricity(best) - target)) best = j;
        }
        return best;
    };
    auto argmax_ecc = [](const FiniteMetricSpace& s) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s.eccentricity(i) > s.eccentricity(best)) best = i;
        }
        return best;
    };

    std::vector<Candidate> results(static_cast<std::size_t>(restarts));
    parallel_for(results.size(), [&](std::size_t r) {
        std::mt19937_64 rng(options.seed * 1000003ULL + r);
        Maps maps;
        if (r == 0 || !small) {
            std::size_t sx, sy;
            if (base) {
                sx = base->first;
                sy = base->second;
            } else if (r == 0) {
                sx = argmax_ecc(x);
                sy = argmax_ecc(y);
            } else {
                sx = static_cast<std::size_t>(rng() % n);
                sy = ecc_closest(x.eccentricity(sx));
            }
            // pointed restarts vary the landmark count instead of the start
            std::size_t kk = base && r > 0 ? std::min<std::size_t>(2 + r % 5, std::min(n, m)) : k;
            maps = landmark_seed(x, y, base, sx, sy, kk);
        } else {
            maps.f.resize(n);
            maps.g.resize(m);
            for (auto& v : maps.f) v = static_cast<std::size_t>(rng() % m);
            for (auto& v : maps.g) v = static_cast<std::size_t>(rng() % n);
            if (base) {
                maps.f[base->first] = base->second;
                maps.g[base->second] = base->first;
            }
        }
        if (searchable) {
            LocalSearch ls(x, y, base, std::move(maps), options.work_budget / restarts - seed_cost);
            ls.run();
            results[r] = Candidate{ls.distortion(), ls.maps()};
        } else {
            double d = maps_distortion(x, y, maps);
            results[r] = Candidate{d, std::move(maps)};
        }
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < results.size(); ++r) {
        if (results[r].distortion < results[best].distortion) best = r;
    }
    return std::move(results[best]);
}

GhResult exact_impl(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base,
                    std::uint64_t budget) {
    require_nonempty(x, y);
    GhOptions quick;
    quick.restarts = 20;
    Candidate seed = heuristic_upper(x, y, base, quick);
    BranchAndBound bb(x, y, base, budget, seed.distortion, seed.maps);
    bool closed = bb.run();

    GhResult result;
    result.nodes = bb.nodes();
    result.upper = 0.5 * bb.best();
    result.witness = to_correspondence(bb.best_maps());
    if (closed) {
        result.exact = result.upper;
        result.lower = result.upper;
    } else {
        result.lower = std::min(result.upper, gh_lower_bound(x, y, base));
    }
    return result;
}

GhResult bounds_impl(const FiniteMetricSpace& x, const FiniteMetricSpace& y, BasePair base,
                     const GhOptions& options) {
    require_nonempty(x, y);
    GhResult result;
    Candidate c = heuristic_upper(x, y, base, options);
    result.upper = 0.5 * c.distortion;
    result.witness = to_correspondence(c.maps);
    result.lower = std::min(result.upper, gh_lower_bound(x, y, base));
    return result;
}

GhResult swapped(GhResult r) {
    if (r.witness) r.witness = r.witness->transposed();
    return r;
}

}  // namespace

bool Correspondence::contains(std::size_t i, std::size_t j) const {
    return std::find(pairs.begin(), pairs.end(), std::pair{i, j}) != pairs.end();
}

Correspondence Correspondence::transposed() const {
    Correspondence t;
    t.pairs.reserve(pairs.size());
    for (const auto& [i, j] : pairs) t.pairs.emplace_back(j, i);
    std::sort(t.pairs.begin(), t.pairs.end());
    return t;
}

double distortion_of_correspondence(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                    const Correspondence& r) {
    std::vector<char> seen_x(x.size(), 0), seen_y(y.size(), 0);
    for (const auto& [i, j] : r.pairs) {
        if (i >= x.size() || j >= y.size()) {
            fail(ErrorKind::domain, kModule, "correspondence pair (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
        }
        seen_x[i] = 1;
        seen_y[j] = 1;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!seen_x[i]) fail(ErrorKind::domain, kModule, "correspondence does not cover X index " + std::to_string(i));
    }
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (!seen_y[j]) fail(ErrorKind::domain, kModule, "correspondence does not cover Y index " + std::to_string(j));
    }
    return pairs_distortion(x, y, r.pairs);
}

double gh_lower_bound(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                      std::optional<std::pair<std::size_t, std::size_t>> bases) {
    if (x.empty() || y.empty()) return 0.0;
    double bound = 0.5 * std::abs(x.diameter() - y.diameter());
    bound = std::max(bound, value_set_bound(x, y));
    if (bases) {
        bound = std::max(bound, 0.5 * sorted_hausdorff(sorted_row(x, bases->first), sorted_row(y, bases->second)));
    }
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    if (n * m * (n + m) <= 5e7) bound = std::max(bound, row_bound(x, y));
    return bound;
}

GhResult gh_exact_small(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t node_budget) {
    if (should_swap(x, y)) return swapped(exact_impl(y, x, std::nullopt, node_budget));
    return exact_impl(x, y, std::nullopt, node_budget);
}

GhResult gh_bounds(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const GhOptions& options) {
    if (should_swap(x, y)) return swapped(bounds_impl(y, x, std::nullopt, options));
    return bounds_impl(x, y, std::nullopt, options);
}

GhResult pointed_gh_exact(const PointedWindow& w1, const PointedWindow& w2, std::uint64_t node_budget) {
    require_nonempty(w1.space, w2.space);
    if (should_swap(w1.space, w2.space)) {
        return swapped(exact_impl(w2.space, w1.space, std::pair{w2.base, w1.base}, node_budget));
    }
    return exact_impl(w1.space, w2.space, std::pair{w1.base, w2.base}, node_budget);
}

GhResult pointed_gh_bounds(const PointedWindow& w1, const PointedWindow& w2, const GhOptions& options) {
    require_nonempty(w1.space, w2.space);
    if (w1.base >= w1.space.size() || w2.base >= w2.space.size()) {
        fail(ErrorKind::domain, kModule, "window base index out of range");
    }
    std::vector<std::string> warnings;
    if (std::abs(w1.radius - w2.radius) > 1e-12 * std::max(1.0, std::max(w1.radius, w2.radius))) {
        warnings.push_back("windows extracted at unequal radii " + std::to_string(w1.radius) + " and " +
                           std::to_string(w2.radius));
    }
    GhResult r;
    if (w1.space.size() <= options.exact_max_points && w2.space.size() <= options.exact_max_points) {
        r = pointed_gh_exact(w1, w2, options.node_budget);
    } else if (should_swap(w1.space, w2.space)) {
        r = swapped(bounds_impl(w2.space, w1.space, std::pair{w2.base, w1.base}, options));
    } else {
        r = bounds_impl(w1.space, w2.space, std::pair{w1.base, w2.base}, options);
    }
    r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
    return r;
}

MapDistortion map_distortion(std::span<const std::size_t> f, const FiniteMetricSpace& x,
                             const FiniteMetricSpace& y) {
    if (f.size() != x.size()) {
        fail(ErrorKind::domain, kModule, "map must assign an image to each of the " + std::to_string(x.size()) + " points");
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= y.size()) {
            fail(ErrorKind::domain, kModule, "image index " + std::to_string(f[i]) + " of point " + std::to_string(i) + " out of range");
        }
    }
    MapDistortion out;
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto xr = x.row(i);
        auto yr = y.row(f[i]);
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            out.distortion = std::max(out.distortion, std::abs(xr[j] - yr[f[j]]));
        }
    }
    for (std::size_t q = 0; q < y.size(); ++q) {
        auto yr = y.row(q);
        double nearest = kInf;
        for (std::size_t i = 0; i < x.size(); ++i) nearest = std::min(nearest, yr[f[i]]);
        out.surjectivity_defect = std::max(out.surjectivity_defect, nearest);
    }
    return out;
}

Correspondence correspondence_from_map(std::span<const std::size_t> f, const FiniteMetricSpace& x,
                                       const FiniteMetricSpace& y) {
    map_distortion(f, x, y);  // validates f
    Correspondence r;
    for (std::size_t i = 0; i < x.size(); ++i) r.pairs.emplace_back(i, f[i]);
    for (std::size_t q = 0; q < y.size(); ++q) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (y(q, f[i]) < y(q, f[best])) best = i;
        }
        r.pairs.emplace_back(best, q);
    }
    std::sort(r.pairs.begin(), r.pairs.end());
    r.pairs.erase(std::unique(r.pairs.begin(), r.pairs.end()), r.pairs.end());
    return r;
}

}  // namespace metriclab
