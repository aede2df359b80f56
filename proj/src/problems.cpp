#include "bellbound/problems.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>
#include <vector>

#include "bellbound/error.hpp"

namespace bellbound {

namespace {

// Full tables on 2^n inputs per side stay printable and scannable up to
// n = 4; beyond that the generators refuse rather than degrade.
constexpr std::size_t kMaxTableBits = 4;

// Indicator string for a subset mask of {0, .., n-1}, position i holding
// the bit for element i.
std::string bit_label(std::size_t mask, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) s[i] = '1';
    }
    return s;
}

// Sign string for a point of {-1,+1}^n, position i holding coordinate i;
// a set bit stands for +1.
std::string sign_label(std::size_t mask, std::size_t n) {
    std::string s(n, '-');
    for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) s[i] = '+';
    }
    return s;
}

std::vector<std::string> make_labels(std::size_t n,
                                     std::string (*label)(std::size_t,
                                                          std::size_t)) {
    std::vector<std::string> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        out.push_back(label(mask, n));
    }
    return out;
}

// All cells of the table where the function takes the given value, in
// row-major order.
std::vector<std::pair<std::size_t, std::size_t>> side_cells(
    const PartialFunction& f, int wanted) {
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t x = 0; x < f.inputs_a.size(); ++x) {
        for (std::size_t y = 0; y < f.inputs_b.size(); ++y) {
            if (f.value[x][y] == wanted) cells.emplace_back(x, y);
        }
    }
    return cells;
}

// Builds the one-penalty/one-reward certificate with penalties on the
// (1-z)-side at weight 1 and rewards on the z-side, choosing the reward
// weight from a fixed grid by the value the compiled functional would give
// the promise family and setting g to the exact rectangle optimum for that
// weight. Returns nothing when the nominal rectangle count exceeds the
// budget, or when the reward side carries no mass so every such
// certificate would be worthless.
std::optional<CorruptionCertificate> attach_tightened(
    const PartialFunction& f, const std::vector<Rat>& mu, int z,
    std::size_t budget) {
    const std::size_t nx = f.inputs_a.size();
    const std::size_t ny = f.inputs_b.size();
    if (nx + ny >= 63 || (std::size_t{1} << (nx + ny)) > budget) {
        return std::nullopt;
    }

    Rat reward_mass = 0;
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            if (f.value[x][y] == z) reward_mass += mu[x * ny + y];
        }
    }
    if (reward_mass == 0) return std::nullopt;

    // The 1/45 entry mirrors the reward weight of the asymptotic
    // disjointness analysis; the rest bracket it from above.
    const std::vector<Rat> grid = {rat(1, 45), rat(1, 4), rat(1, 2), Rat(1),
                                   Rat(2)};
    const auto table = tighten_certificate(f, mu, z, grid, budget);

    // The compiled functional scores the promise family at
    // gamma * reward_mass / (2 g), so pick the weight maximizing that;
    // ties go to the earliest grid entry. Some g can be positive because
    // the reward side carries mass, so a winner always exists.
    const TightenEntry* best = nullptr;
    Rat best_value = 0;
    for (const auto& entry : table) {
        if (entry.g_star == 0) continue;
        const Rat value = entry.gamma * reward_mass / (entry.g_star * 2);
        if (best == nullptr || value > best_value) {
            best = &entry;
            best_value = value;
        }
    }
    if (best == nullptr) return std::nullopt;

    CorruptionCertificate cert;
    cert.f = f;
    cert.mu = mu;
    cert.z = z;
    if (auto penalties = side_cells(f, 1 - z); !penalties.empty()) {
        cert.penalty_sets.push_back({std::move(penalties), Rat(1)});
    }
    cert.reward_sets.push_back({side_cells(f, z), best->gamma});
    cert.g = best->g_star;
    cert.validate();
    const auto report = verify_rectangle_condition(cert, budget);
    BELLBOUND_CHECK(report.holds, ErrorCode::GuaranteeViolated,
                    "tightened certificate failed its own rectangle scan");
    return cert;
}

}  // namespace

std::vector<Rat> disj_mu(std::size_t n) {
    BELLBOUND_CHECK(n >= 1 && n <= kMaxTableBits, ErrorCode::InvalidArgument,
                    "disjointness input length must lie in [1, 4]");
    BELLBOUND_CHECK(n >= 2, ErrorCode::InvalidArgument,
                    "no balanced disjoint pairs exist at length 1");
    const std::size_t side = std::size_t{1} << n;
    const std::size_t m = std::max<std::size_t>(1, (n + 1) / 4);

    std::vector<std::pair<std::size_t, std::size_t>> disjoint;
    std::vector<std::pair<std::size_t, std::size_t>> one_common;
    for (std::size_t x = 0; x < side; ++x) {
        if (std::popcount(x) != static_cast<int>(m)) continue;
        for (std::size_t y = 0; y < side; ++y) {
            if (std::popcount(y) != static_cast<int>(m)) continue;
            const int overlap = std::popcount(x & y);
            if (overlap == 0) disjoint.emplace_back(x, y);
            if (overlap == 1) one_common.emplace_back(x, y);
        }
    }
    BELLBOUND_CHECK(!disjoint.empty() && !one_common.empty(),
                    ErrorCode::InvalidArgument,
                    "balanced support is empty at this length");

    std::vector<Rat> mu(side * side, Rat(0));
    for (const auto& [x, y] : disjoint) {
        mu[x * side + y] += rat(1, static_cast<long>(2 * disjoint.size()));
    }
    for (const auto& [x, y] : one_common) {
        mu[x * side + y] += rat(1, static_cast<long>(2 * one_common.size()));
    }
    return mu;
}

ProblemInstance disj(std::size_t n, std::size_t budget) {
    BELLBOUND_CHECK(n >= 1 && n <= kMaxTableBits, ErrorCode::InvalidArgument,
                    "disjointness input length must lie in [1, 4]");
    const std::size_t side = std::size_t{1} << n;

    ProblemInstance inst;
    inst.name = "disj" + std::to_string(n);
    inst.bits = n;
    inst.f.inputs_a = make_labels(n, bit_label);
    inst.f.inputs_b = inst.f.inputs_a;
    inst.f.value.assign(side, std::vector<int>(side, 0));
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            inst.f.value[x][y] = (x & y) == 0 ? 1 : 0;
        }
    }

    inst.notes.emplace_back("asymptotic_reward_weight", "1/45");
    inst.notes.emplace_back("asymptotic_slack",
                            "(4/9) * 2^(-c*n) for a constant c > 0");
    if (n >= 2) {
        inst.notes.emplace_back(
            "balanced_set_size",
            std::to_string(std::max<std::size_t>(1, (n + 1) / 4)));
        inst.certificate = attach_tightened(inst.f, disj_mu(n), 1, budget);
    } else {
        inst.notes.emplace_back("certificate",
                                "none: the balanced disjoint support is "
                                "empty at length 1");
    }
    return inst;
}

ProblemInstance tribes(std::size_t s, std::size_t t, std::size_t budget) {
    BELLBOUND_CHECK(s >= 1 && t >= 1, ErrorCode::InvalidArgument,
                    "tribes needs at least one block of width one");
    BELLBOUND_CHECK(s * t <= 2 * kMaxTableBits, ErrorCode::InvalidArgument,
                    "tribes input length must stay at most 8");
    const std::size_t n = s * t;
    const std::size_t side = std::size_t{1} << n;

    ProblemInstance inst;
    inst.name = "tribes" + std::to_string(s) + "x" + std::to_string(t);
    inst.bits = n;
    inst.f.inputs_a = make_labels(n, bit_label);
    inst.f.inputs_b = inst.f.inputs_a;
    inst.f.value.assign(side, std::vector<int>(side, 0));
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            // AND over blocks of OR over block coordinates of x_i and y_i.
            const std::size_t common = x & y;
            bool all = true;
            for (std::size_t b = 0; b < s && all; ++b) {
                const std::size_t block = ((std::size_t{1} << t) - 1) << (b * t);
                all = (common & block) != 0;
            }
            inst.f.value[x][y] = all ? 1 : 0;
        }
    }

    inst.notes.emplace_back("blocks", std::to_string(s));
    inst.notes.emplace_back("block_width", std::to_string(t));
    inst.notes.emplace_back(
        "asymptotic_skeleton",
        "penalty weight gamma on the zero side; reward weights alpha and "
        "-lambda on a two-part split of the one side");
    inst.notes.emplace_back("asymptotic_alpha", "99/100");
    inst.notes.emplace_back("asymptotic_lambda", "160000/29403");
    inst.notes.emplace_back("asymptotic_gamma", "160000/9801");
    inst.notes.emplace_back(
        "asymptotic_square_case",
        "n = (2r+1)^2 with r >= 2: beta = (r+2)/(r+1); the zero side "
        "carries mass 1 - 7*beta^2/16, the split parts 6*beta^2/16 and "
        "beta^2/16");

    std::vector<Rat> mu(side * side, rat(1, static_cast<long>(side * side)));
    inst.certificate = attach_tightened(inst.f, mu, 1, budget);
    return inst;
}

ProblemInstance ort(std::size_t n, std::size_t l, std::size_t budget) {
    BELLBOUND_CHECK(n >= 1 && n <= kMaxTableBits, ErrorCode::InvalidArgument,
                    "orthogonality input length must lie in [1, 4]");
    BELLBOUND_CHECK(l <= 63, ErrorCode::InvalidArgument,
                    "padding length must lie in [0, 63]");
    const std::size_t side = std::size_t{1} << n;

    ProblemInstance inst;
    inst.name = "ort" + std::to_string(n);
    inst.bits = n;
    inst.f.inputs_a = make_labels(n, sign_label);
    inst.f.inputs_b = inst.f.inputs_a;
    inst.f.value.assign(side, std::vector<int>(side, -1));
    std::size_t defined = 0;
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            const long t =
                static_cast<long>(n) - 2 * std::popcount(x ^ y);
            // Thresholds sqrt(n)/8 and sqrt(n)/4, compared exactly via
            // squares; the gap between them holds no integer at n <= 4, so
            // these small tables are total.
            if (64 * t * t <= static_cast<long>(n)) {
                inst.f.value[x][y] = 1;
            } else if (16 * t * t >= static_cast<long>(n)) {
                inst.f.value[x][y] = 0;
            }
            if (inst.f.value[x][y] >= 0) ++defined;
        }
    }

    inst.notes.emplace_back("padding_length", std::to_string(l));
    inst.notes.emplace_back(
        "thresholds",
        "output 1 when 64*t^2 <= n and 0 when 16*t^2 >= n, for t = <x,y>");
    inst.notes.emplace_back(
        "repetition",
        "inputs stand for their 64-fold repetitions, whose inner product "
        "is 64*t");

    std::vector<Rat> mu(side * side, Rat(0));
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            if (inst.f.value[x][y] >= 0) {
                mu[x * side + y] = rat(1, static_cast<long>(defined));
            }
        }
    }
    inst.certificate = attach_tightened(inst.f, mu, 1, budget);
    return inst;
}

std::vector<PaddedWeight> ort_padding(std::size_t n, std::size_t l) {
    BELLBOUND_CHECK(n >= 1 && n <= kMaxTableBits, ErrorCode::InvalidArgument,
                    "orthogonality input length must lie in [1, 4]");
    BELLBOUND_CHECK(l <= 63, ErrorCode::InvalidArgument,
                    "padding length must lie in [0, 63]");
    const std::size_t side = std::size_t{1} << n;

    // Each base pair keeps its uniform weight; only the sign of the
    // all-equal suffix v depends on where the repeated inner product
    // t64 = 64*t falls against sqrt(64*n): v = -1^l when t64 < -sqrt(64n)
    // or 0 <= t64 <= sqrt(64n), and v = +1^l on the complementary ranges,
    // so the two cases partition the pairs and the weights still sum to 1.
    std::vector<PaddedWeight> out(side * side);
    for (std::size_t x = 0; x < side; ++x) {
        for (std::size_t y = 0; y < side; ++y) {
            const long t =
                static_cast<long>(n) - 2 * std::popcount(x ^ y);
            const long t64 = 64 * t;
            const bool minus = t64 < 0 ? t64 * t64 > 64 * static_cast<long>(n)
                                       : t64 * t64 <= 64 * static_cast<long>(n);
            out[x * side + y] = {!minus, rat(1, static_cast<long>(side * side))};
        }
    }
    return out;
}

std::vector<ProblemInstance> toy_catalog(std::size_t budget) {
    std::vector<ProblemInstance> out;

    // 1-bit AND; its promise family is the correlated box whose locality
    // gap the CHSH analysis measures.
    {
        ProblemInstance inst;
        inst.name = "and1";
        inst.bits = 1;
        inst.f.inputs_a = {"0", "1"};
        inst.f.inputs_b = {"0", "1"};
        inst.f.value = {{0, 0}, {0, 1}};
        std::vector<Rat> mu(4, rat(1, 4));
        inst.certificate = standard_certificate(inst.f, mu, Rat(1), rat(1, 2));
        inst.notes.emplace_back("promise_family", "correlated box");
        out.push_back(std::move(inst));
    }

    // Equality on 2-bit strings.
    {
        ProblemInstance inst;
        inst.name = "eq2";
        inst.bits = 2;
        inst.f.inputs_a = make_labels(2, bit_label);
        inst.f.inputs_b = inst.f.inputs_a;
        inst.f.value.assign(4, std::vector<int>(4, 0));
        for (std::size_t x = 0; x < 4; ++x) inst.f.value[x][x] = 1;
        std::vector<Rat> mu(16, rat(1, 16));
        inst.certificate = standard_certificate(inst.f, mu, Rat(1), rat(1, 2));
        out.push_back(std::move(inst));
    }

    // The all-zero function on 2-bit strings; its promise family is local.
    {
        ProblemInstance inst;
        inst.name = "const0";
        inst.bits = 2;
        inst.f.inputs_a = make_labels(2, bit_label);
        inst.f.inputs_b = inst.f.inputs_a;
        inst.f.value.assign(4, std::vector<int>(4, 0));
        std::vector<Rat> mu(16, rat(1, 16));
        inst.certificate = standard_certificate(inst.f, mu, Rat(1), Rat(1));
        inst.notes.emplace_back("promise_family", "local");
        out.push_back(std::move(inst));
    }

    for (const auto& inst : out) {
        const auto report = verify_rectangle_condition(*inst.certificate,
                                                       budget);
        BELLBOUND_CHECK(report.holds, ErrorCode::GuaranteeViolated,
                        "catalog certificate failed its rectangle scan");
    }
    return out;
}

}  // namespace bellbound
