#include "bellbound/corruption.hpp"

#include <random>
#include <string>
#include <utility>

#include "bellbound/error.hpp"

namespace bellbound {

namespace {

// The partial-function struct is plain data; the certificate machinery is
// the first place its shape actually matters, so it is checked here.
void validate_function(const PartialFunction& f) {
    BELLBOUND_CHECK(!f.inputs_a.empty() && !f.inputs_b.empty(), ErrorCode::InvalidArgument,
                    "partial function needs at least one input label per side");
    BELLBOUND_CHECK(f.value.size() == f.inputs_a.size(), ErrorCode::InvalidArgument,
                    "value table does not match the first input side");
    for (const auto& row : f.value) {
        BELLBOUND_CHECK(row.size() == f.inputs_b.size(), ErrorCode::InvalidArgument,
                        "value table does not match the second input side");
        for (int v : row)
            BELLBOUND_CHECK(v >= -1 && v <= 1, ErrorCode::InvalidArgument,
                            "function values must be 0, 1, or -1 for off-promise");
    }
    BELLBOUND_CHECK(f.domain_size() > 0, ErrorCode::InvalidArgument,
                    "function is nowhere defined");
}

// mu must be a distribution supported on the promise. Off-promise inputs get
// zero coefficients in every built functional, so weight placed there would
// silently vanish from all the guarantees.
void validate_mu(const PartialFunction& f, const std::vector<Rat>& mu) {
    const std::size_t nx = f.inputs_a.size(), ny = f.inputs_b.size();
    BELLBOUND_CHECK(mu.size() == nx * ny, ErrorCode::InvalidDistribution,
                    "mu table does not match the input grid");
    Rat total(0);
    for (const Rat& w : mu) {
        BELLBOUND_CHECK(w >= 0, ErrorCode::InvalidDistribution, "mu has a negative entry");
        total += w;
    }
    BELLBOUND_CHECK(total == Rat(1), ErrorCode::InvalidDistribution, "mu does not sum to 1");
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
            BELLBOUND_CHECK(f.defined(x, y) || mu[x * ny + y] == 0,
                            ErrorCode::InvalidDistribution,
                            "off-promise inputs must carry zero mu weight");
}

}  // namespace

Rat CorruptionCertificate::mass(const WeightedSet& set) const {
    Rat total(0);
    for (const auto& [x, y] : set.cells) total += mu_at(x, y);
    return total;
}

void CorruptionCertificate::validate() const {
    validate_function(f);
    validate_mu(f, mu);
    BELLBOUND_CHECK(z == 0 || z == 1, ErrorCode::InvalidArgument, "z must be a bit");
    BELLBOUND_CHECK(g > 0, ErrorCode::InvalidArgument, "slack allowance g must be positive");

    const auto check_family = [&](const std::vector<WeightedSet>& sets, int wanted,
                                  const char* side) {
        std::vector<bool> seen(nx() * ny(), false);
        for (const WeightedSet& set : sets)
            for (const auto& [x, y] : set.cells) {
                BELLBOUND_CHECK(x < nx() && y < ny(), ErrorCode::InvalidArgument,
                                std::string(side) + " set cell out of range");
                BELLBOUND_CHECK(f.defined(x, y) && f.value[x][y] == wanted,
                                ErrorCode::InvalidArgument,
                                std::string(side) + " set cell off its function side");
                const std::size_t t = x * ny() + y;
                BELLBOUND_CHECK(!seen[t], ErrorCode::InvalidArgument,
                                std::string(side) + " sets overlap");
                seen[t] = true;
            }
    };
    check_family(penalty_sets, 1 - z, "penalty");
    check_family(reward_sets, z, "reward");
}

CorruptionCertificate standard_certificate(PartialFunction f, std::vector<Rat> mu,
                                           const Rat& gamma, const Rat& g) {
    CorruptionCertificate cert;
    cert.f = std::move(f);
    cert.mu = std::move(mu);
    cert.z = 0;
    cert.g = g;
    validate_function(cert.f);
    WeightedSet penalty, reward;
    penalty.weight = Rat(1);
    reward.weight = gamma;
    for (std::size_t x = 0; x < cert.nx(); ++x)
        for (std::size_t y = 0; y < cert.ny(); ++y) {
            if (!cert.f.defined(x, y)) continue;
            if (cert.f.value[x][y] == 1) penalty.cells.emplace_back(x, y);
            if (cert.f.value[x][y] == 0) reward.cells.emplace_back(x, y);
        }
    if (!penalty.cells.empty()) cert.penalty_sets.push_back(std::move(penalty));
    if (!reward.cells.empty()) cert.reward_sets.push_back(std::move(reward));
    cert.validate();
    return cert;
}

namespace {

// Per-cell contribution to the rectangle slack: +u_i mu on penalty cells,
// -v_j mu on reward cells, zero elsewhere. Sets are disjoint, so each cell
// receives at most one term.
std::vector<Rat> slack_table(const CorruptionCertificate& cert) {
    const std::size_t ny = cert.ny();
    std::vector<Rat> h(cert.mu.size(), Rat(0));
    for (const WeightedSet& set : cert.penalty_sets)
        for (const auto& [x, y] : set.cells) h[x * ny + y] = set.weight * cert.mu_at(x, y);
    for (const WeightedSet& set : cert.reward_sets)
        for (const auto& [x, y] : set.cells) h[x * ny + y] = -set.weight * cert.mu_at(x, y);
    return h;
}

void check_rectangle_budget(std::size_t nx, std::size_t ny, std::size_t budget) {
    BELLBOUND_CHECK(nx + ny < 63, ErrorCode::BudgetExceeded,
                    "rectangle count overflows the budget gauge");
    BELLBOUND_CHECK((std::size_t{1} << (nx + ny)) <= budget, ErrorCode::BudgetExceeded,
                    "exhaustive rectangle scan exceeds the enumeration budget");
}

std::vector<std::size_t> mask_to_indices(std::uint64_t mask, std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < count; ++i)
        if (mask >> i & 1) out.push_back(i);
    return out;
}

Rat rectangle_slack(const CorruptionCertificate& cert, const std::vector<Rat>& h,
                    std::uint64_t mask_a, std::uint64_t mask_b) {
    Rat slack = cert.g;
    for (std::size_t x = 0; x < cert.nx(); ++x) {
        if (!(mask_a >> x & 1)) continue;
        for (std::size_t y = 0; y < cert.ny(); ++y)
            if (mask_b >> y & 1) slack += h[x * cert.ny() + y];
    }
    return slack;
}

}  // namespace

RectangleReport verify_rectangle_condition(const CorruptionCertificate& cert,
                                           std::size_t budget) {
    cert.validate();
    const std::size_t nx = cert.nx(), ny = cert.ny();
    check_rectangle_budget(nx, ny, budget);
    const std::vector<Rat> h = slack_table(cert);

    // Enumerate subsets of the smaller input side; for a fixed subset the
    // other side is minimized per column, since each column enters the
    // slack independently.
    const bool rows_are_x = nx <= ny;
    const std::size_t rows = rows_are_x ? nx : ny;
    const std::size_t cols = rows_are_x ? ny : nx;
    const auto cell = [&](std::size_t r, std::size_t c) -> const Rat& {
        return rows_are_x ? h[r * ny + c] : h[c * ny + r];
    };

    // Column sums over the current row subset, walked in Gray-code order so
    // each step toggles a single row.
    std::vector<Rat> colsum(cols, Rat(0));
    RectangleReport best;
    best.certified = true;
    best.slack = cert.g;  // the empty rectangle
    std::uint64_t best_rows = 0;
    std::uint64_t best_cols = 0;
    std::uint64_t mask = 0;
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << rows); ++step) {
        const std::size_t toggled = static_cast<std::size_t>(__builtin_ctzll(step));
        mask ^= std::uint64_t{1} << toggled;
        const bool added = (mask >> toggled) & 1;
        for (std::size_t c = 0; c < cols; ++c) {
            if (added)
                colsum[c] += cell(toggled, c);
            else
                colsum[c] -= cell(toggled, c);
        }
        Rat slack = cert.g;
        std::uint64_t picked = 0;
        for (std::size_t c = 0; c < cols; ++c)
            if (colsum[c] < 0) {
                slack += colsum[c];
                picked |= std::uint64_t{1} << c;
            }
        if (slack < best.slack) {
            best.slack = slack;
            best_rows = mask;
            best_cols = picked;
        }
    }
    best.holds = best.slack >= 0;
    best.rect_a = mask_to_indices(rows_are_x ? best_rows : best_cols, nx);
    best.rect_b = mask_to_indices(rows_are_x ? best_cols : best_rows, ny);
    best.scanned = std::size_t{1} << (nx + ny);
    return best;
}

RectangleReport verify_rectangle_condition_sampled(const CorruptionCertificate& cert,
                                                   std::size_t samples, std::uint64_t seed) {
    cert.validate();
    const std::size_t nx = cert.nx(), ny = cert.ny();
    BELLBOUND_CHECK(nx < 64 && ny < 64, ErrorCode::InvalidArgument,
                    "input sides beyond 63 labels are not supported");
    const std::vector<Rat> h = slack_table(cert);

    std::mt19937_64 engine(seed);
    const std::uint64_t limit_a = nx == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << nx) - 1;
    const std::uint64_t limit_b = ny == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << ny) - 1;

    RectangleReport best;
    best.certified = false;
    best.slack = cert.g;  // the empty rectangle is always covered
    std::uint64_t best_a = 0, best_b = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::uint64_t mask_a = engine() & limit_a;
        const std::uint64_t mask_b = engine() & limit_b;
        const Rat slack = rectangle_slack(cert, h, mask_a, mask_b);
        if (slack < best.slack) {
            best.slack = slack;
            best_a = mask_a;
            best_b = mask_b;
        }
    }
    best.holds = best.slack >= 0;
    best.rect_a = mask_to_indices(best_a, nx);
    best.rect_b = mask_to_indices(best_b, ny);
    best.scanned = samples;
    return best;
}

std::vector<TightenEntry> tighten_certificate(const PartialFunction& f,
                                              const std::vector<Rat>& mu, int z,
                                              const std::vector<Rat>& gamma_grid,
                                              std::size_t budget) {
    validate_function(f);
    validate_mu(f, mu);
    BELLBOUND_CHECK(z == 0 || z == 1, ErrorCode::InvalidArgument, "z must be a bit");
    BELLBOUND_CHECK(!gamma_grid.empty(), ErrorCode::InvalidArgument,
                    "tightening needs a nonempty gamma grid");
    const std::size_t nx = f.inputs_a.size(), ny = f.inputs_b.size();
    check_rectangle_budget(nx, ny, budget);

    // Reward-side and penalty-side mass per cell; the grid's gamma only
    // scales the reward side, so one subset walk serves every gamma.
    std::vector<Rat> reward(nx * ny, Rat(0)), penalty(nx * ny, Rat(0));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            if (!f.defined(x, y)) continue;
            if (f.value[x][y] == z) reward[x * ny + y] = mu[x * ny + y];
            if (f.value[x][y] == 1 - z) penalty[x * ny + y] = mu[x * ny + y];
        }

    const bool rows_are_x = nx <= ny;
    const std::size_t rows = rows_are_x ? nx : ny;
    const std::size_t cols = rows_are_x ? ny : nx;
    const auto cell = [&](const std::vector<Rat>& table, std::size_t r,
                          std::size_t c) -> const Rat& {
        return rows_are_x ? table[r * ny + c] : table[c * ny + r];
    };

    std::vector<TightenEntry> out(gamma_grid.size());
    for (std::size_t k = 0; k < gamma_grid.size(); ++k) {
        out[k].gamma = gamma_grid[k];
        out[k].g_star = Rat(0);  // the empty rectangle
    }
    std::vector<std::uint64_t> best_rows(gamma_grid.size(), 0);
    std::vector<std::uint64_t> best_cols(gamma_grid.size(), 0);

    std::vector<Rat> reward_sum(cols, Rat(0)), penalty_sum(cols, Rat(0));
    std::uint64_t mask = 0;
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << rows); ++step) {
        const std::size_t toggled = static_cast<std::size_t>(__builtin_ctzll(step));
        mask ^= std::uint64_t{1} << toggled;
        const bool added = (mask >> toggled) & 1;
        for (std::size_t c = 0; c < cols; ++c) {
            if (added) {
                reward_sum[c] += cell(reward, toggled, c);
                penalty_sum[c] += cell(penalty, toggled, c);
            } else {
                reward_sum[c] -= cell(reward, toggled, c);
                penalty_sum[c] -= cell(penalty, toggled, c);
            }
        }
        for (std::size_t k = 0; k < gamma_grid.size(); ++k) {
            Rat val(0);
            std::uint64_t picked = 0;
            for (std::size_t c = 0; c < cols; ++c) {
                const Rat margin = gamma_grid[k] * reward_sum[c] - penalty_sum[c];
                if (margin > 0) {
                    val += margin;
                    picked |= std::uint64_t{1} << c;
                }
            }
            if (val > out[k].g_star) {
                out[k].g_star = val;
                best_rows[k] = mask;
                best_cols[k] = picked;
            }
        }
    }
    for (std::size_t k = 0; k < gamma_grid.size(); ++k) {
        out[k].rect_a = mask_to_indices(rows_are_x ? best_rows[k] : best_cols[k], nx);
        out[k].rect_b = mask_to_indices(rows_are_x ? best_cols[k] : best_rows[k], ny);
    }
    return out;
}

BellFunctional build_bell(const CorruptionCertificate& cert,
                          bool require_rectangle_condition, std::size_t budget) {
    cert.validate();
    if (require_rectangle_condition) {
        const RectangleReport report = verify_rectangle_condition(cert, budget);
        if (!report.holds) {
            std::string rect = "{";
            for (std::size_t x : report.rect_a) rect += " " + std::to_string(x);
            rect += " } x {";
            for (std::size_t y : report.rect_b) rect += " " + std::to_string(y);
            rect += " }";
            throw Error(ErrorCode::RectangleCondition,
                        "rectangle inequality fails at " + rect + " with slack " +
                            rat_to_string(report.slack));
        }
    }

    const Scenario sc(cert.f.inputs_a, cert.f.inputs_b, {"0", "1"}, {"0", "1"},
                      /*abort=*/false);
    const Rat scale = Rat(1) / (2 * cert.g);
    BellFunctional b(sc);
    const auto paint = [&](const WeightedSet& set, const Rat& signed_weight) {
        for (const auto& [x, y] : set.cells) {
            const Rat coeff = signed_weight * cert.mu_at(x, y) * scale;
            for (std::size_t a = 0; a < 2; ++a)
                b.at(a, a ^ static_cast<std::size_t>(cert.z), x, y) = coeff;
        }
    };
    for (const WeightedSet& set : cert.penalty_sets) paint(set, -set.weight);
    for (const WeightedSet& set : cert.reward_sets) paint(set, set.weight);

    // Both advertised guarantees are re-verified on the finished object.
    Rat reward_value(0);
    for (const WeightedSet& set : cert.reward_sets)
        reward_value += set.weight * cert.mass(set);
    BELLBOUND_CHECK(evaluate(b, build_pf(cert.f)) == reward_value * scale,
                    ErrorCode::GuaranteeViolated,
                    "value on the promise family misses its closed form");
    const LdetMax mx = max_bell_over_ldet(b, /*with_abort=*/true, /*absolute=*/false, budget);
    BELLBOUND_CHECK(mx.value <= Rat(1), ErrorCode::GuaranteeViolated,
                    "an abort-extended strategy exceeds the bound of 1");
    return b;
}

Rat robustness_bound(const CorruptionCertificate& cert, const Rat& eps) {
    cert.validate();
    BELLBOUND_CHECK(eps >= 0, ErrorCode::InvalidArgument, "eps must be nonnegative");
    Rat reward_value(0), worst_case(0);
    for (const WeightedSet& set : cert.reward_sets) {
        const Rat m = cert.mass(set);
        reward_value += set.weight * m;
        worst_case += abs(set.weight) * m;
    }
    for (const WeightedSet& set : cert.penalty_sets)
        worst_case += abs(set.weight) * cert.mass(set);
    return (reward_value - eps * worst_case) / (2 * cert.g);
}

}  // namespace bellbound
