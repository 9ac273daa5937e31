#include "metriclab/free_group.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/space_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

namespace metriclab {

namespace {

constexpr const char* kModule = "boundary_free_group";

void check_rank(int rank) {
    if (rank < 1 || rank > 26) fail(ErrorKind::domain, kModule, "rank must lie in [1, 26]");
}

char invert(char c) {
    return std::islower(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                                                        : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

void check_letter(char c, int rank) {
    const bool lower = c >= 'a' && c < 'a' + rank;
    const bool upper = c >= 'A' && c < 'A' + rank;
    if (!lower && !upper) {
        fail(ErrorKind::alphabet, kModule, std::string("letter '") + c + "' is not in the alphabet of F_" + std::to_string(rank));
    }
}

std::string alphabet(int rank) {
    std::string letters;
    for (int i = 0; i < rank; ++i) {
        letters.push_back(static_cast<char>('a' + i));
        letters.push_back(static_cast<char>('A' + i));
    }
    return letters;
}

void extend(const std::string& letters, int depth, Word& current, std::vector<Word>& out) {
    if (static_cast<int>(current.size()) == depth) {
        out.push_back(current);
        return;
    }
    for (char c : letters) {
        if (!current.empty() && current.back() == invert(c)) continue;
        current.push_back(c);
        extend(letters, depth, current, out);
        current.pop_back();
    }
}

std::vector<std::size_t> sample_indices(std::size_t total, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates with modulo draws, portable across standard libraries
    for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng() % (total - i)]);
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

Word reduce_word(std::string_view letters, int rank) {
    check_rank(rank);
    Word out;
    for (char c : letters) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        check_letter(c, rank);
        if (!out.empty() && out.back() == invert(c)) {
            out.pop_back();
        } else {
            out.push_back(c);
        }
    }
    return out;
}

Word inverse_word(std::string_view word) {
    Word out;
    for (auto it = word.rbegin(); it != word.rend(); ++it) out.push_back(invert(*it));
    return out;
}

bool is_reduced(std::string_view word) {
    for (std::size_t i = 1; i < word.size(); ++i) {
        if (word[i] == invert(word[i - 1])) return false;
    }
    return true;
}

BoundaryPoint make_boundary_point(std::string_view word, int rank) {
    check_rank(rank);
    for (char c : word) check_letter(c, rank);
    if (word.empty()) fail(ErrorKind::domain, kModule, "boundary point needs depth >= 1");
    if (!is_reduced(word)) fail(ErrorKind::domain, kModule, "boundary prefix \"" + std::string(word) + "\" is not reduced");
    return BoundaryPoint{Word(word)};
}

GromovProduct gromov_product_prefix(const BoundaryPoint& x, const BoundaryPoint& y) {
    if (x.depth() != y.depth()) {
        fail(ErrorKind::domain, kModule,
             "depth mismatch " + std::to_string(x.depth()) + " vs " + std::to_string(y.depth()));
    }
    int k = 0;
    while (k < x.depth() && x.prefix[k] == y.prefix[k]) ++k;
    return GromovProduct{k, k == x.depth()};
}

double visual_distance(const BoundaryPoint& x, const BoundaryPoint& y, double base) {
    if (!(base > 1.0)) fail(ErrorKind::domain, kModule, "visual base must exceed 1");
    const GromovProduct g = gromov_product_prefix(x, y);
    if (g.saturated) return 0.0;
    return std::pow(base, -g.value);
}

std::vector<Word> enumerate_boundary(int rank, int depth, std::string_view prefix) {
    check_rank(rank);
    if (depth < 0) fail(ErrorKind::domain, kModule, "negative depth");
    for (char c : prefix) check_letter(c, rank);
    if (!is_reduced(prefix)) fail(ErrorKind::domain, kModule, "prefix is not reduced");
    if (static_cast<int>(prefix.size()) > depth) return {};
    const int m = static_cast<int>(prefix.size());
    const double expected = (m == 0 ? 2.0 * rank * std::pow(2.0 * rank - 1.0, depth - 1) : std::pow(2.0 * rank - 1.0, depth - m));
    if (expected > 5e6) fail(ErrorKind::domain, kModule, "enumeration of " + format_number(expected) + " words refused");
    std::vector<Word> out;
    Word current(prefix);
    extend(alphabet(rank), depth, current, out);
    return out;
}

std::uint64_t cylinder_size(int rank, int depth, int m) {
    check_rank(rank);
    if (m < 0 || m > depth) fail(ErrorKind::domain, kModule, "cylinder level must lie in [0, depth]");
    if (depth == 0) return 1;
    std::uint64_t count = m == 0 ? static_cast<std::uint64_t>(2 * rank) : 1;
    const int free_letters = m == 0 ? depth - 1 : depth - m;
    for (int i = 0; i < free_letters; ++i) count *= static_cast<std::uint64_t>(2 * rank - 1);
    return count;
}

CylinderBall cylinder_ball(const BoundaryPoint& p, int m, int rank, double base, std::optional<std::size_t> count,
                           std::uint64_t seed) {
    if (m < 0 || m > p.depth()) {
        fail(ErrorKind::domain, kModule,
             "cylinder level " + std::to_string(m) + " exceeds depth " + std::to_string(p.depth()));
    }
    if (!(base > 1.0)) fail(ErrorKind::domain, kModule, "visual base must exceed 1");
    auto words = enumerate_boundary(rank, p.depth(), std::string_view(p.prefix).substr(0, m));
    if (count && *count < words.size()) {
        std::vector<Word> chosen;
        for (std::size_t i : sample_indices(words.size(), *count, seed)) chosen.push_back(words[i]);
        words = std::move(chosen);
    }
    CylinderBall ball;
    const std::size_t n = words.size();
    for (auto& w : words) ball.points.push_back(BoundaryPoint{w});
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = visual_distance(ball.points[i], ball.points[j], base);
    }
    ball.space = FiniteMetricSpace(std::move(words), std::move(dist));
    return ball;
}

Translation translate_boundary(std::string_view g_letters, const BoundaryPoint& x, int rank) {
    const Word g = reduce_word(g_letters, rank);
    for (char c : x.prefix) check_letter(c, rank);
    int k = 0;
    while (k < static_cast<int>(g.size()) && k < x.depth() && g[g.size() - 1 - k] == invert(x.prefix[k])) ++k;
    if (k >= x.depth()) {
        fail(ErrorKind::insufficient_depth, kModule,
             "translation by \"" + g + "\" consumes all " + std::to_string(x.depth()) + " known letters");
    }
    Translation t;
    t.cancelled = k;
    t.point.prefix = g.substr(0, g.size() - k) + x.prefix.substr(k);
    t.usable_depth = t.point.depth();
    return t;
}

ExpansionStats expansion_factor_probe(const BoundaryPoint& p, int m, int rank, double base,
                                      std::optional<std::size_t> samples, std::uint64_t seed) {
    CylinderBall ball = cylinder_ball(p, m, rank, base, samples, seed);
    const Word g = inverse_word(std::string_view(p.prefix).substr(0, m));
    ExpansionStats stats;
    const std::size_t n = ball.points.size();
    if (n < 2) return stats;
    std::vector<BoundaryPoint> moved;
    for (const auto& x : ball.points) moved.push_back(translate_boundary(g, x, rank).point);
    double sum = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const int before = gromov_product_prefix(ball.points[i], ball.points[j]).value;
            const int after = gromov_product_prefix(moved[i], moved[j]).value;
            const int exponent = before - after;
            const double ratio = visual_distance(moved[i], moved[j], base) / visual_distance(ball.points[i], ball.points[j], base);
            if (first) {
                stats.min = stats.max = ratio;
                stats.exponent_min = stats.exponent_max = exponent;
                first = false;
            }
            stats.min = std::min(stats.min, ratio);
            stats.max = std::max(stats.max, ratio);
            stats.exponent_min = std::min(stats.exponent_min, exponent);
            stats.exponent_max = std::max(stats.exponent_max, exponent);
            sum += ratio;
            ++stats.pairs;
        }
    }
    stats.mean = sum / static_cast<double>(stats.pairs);
    return stats;
}

std::vector<CoverCylinder> expanding_cover(int rank, int m, int depth) {
    if (m < 0 || m > depth) fail(ErrorKind::domain, kModule, "cover level must lie in [0, depth]");
    std::vector<CoverCylinder> cover;
    for (auto& w : enumerate_boundary(rank, m)) cover.push_back({w, inverse_word(w)});
    return cover;
}

}  // namespace metriclab
