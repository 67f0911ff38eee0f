#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/linalg.hpp"
#include "toricount/snf.hpp"

namespace toricount {

/* A rational polyhedral fan given by its rays and maximal cones.  Rays are
 * primitive integer vectors; maximal cones are sets of ray indices.  The
 * toolkit only does real work on smooth complete fans, but validation is a
 * first-class operation so broken inputs get a verdict, not a crash. */
struct Fan {
    int dim = 0;
    std::vector<std::vector<Int>> rays;
    std::vector<std::vector<int>> max_cones;
    std::string name;

    std::size_t num_rays() const { return rays.size(); }
    std::size_t num_cones() const { return max_cones.size(); }
};

struct FanCheckReport {
    bool simplicial = false;
    bool smooth = false;
    bool complete = false;
    std::vector<std::string> reasons;

    bool ok() const { return simplicial && smooth && complete; }
    std::string reason_summary() const {
        std::string s;
        for (const auto& r : reasons) {
            if (!s.empty()) s += "; ";
            s += r;
        }
        return s;
    }
};

inline constexpr std::uint64_t kValidationSeed = 20240817u;
inline constexpr int kValidationDirections = 1000;

namespace detail {

inline std::string vec_str(const std::vector<Int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].get_str();
    }
    return s + ")";
}

inline std::string cone_str(const std::vector<int>& c) {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + "}";
}

// structural screening; throws on inputs that are not even a candidate fan
inline void check_fan_structure(const Fan& fan) {
    if (fan.dim < 1) throw HypothesisError("fan dimension must be >= 1");
    if (fan.rays.empty()) throw HypothesisError("fan has no rays");
    if (fan.max_cones.empty()) throw HypothesisError("fan has no maximal cones");
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        const auto& r = fan.rays[i];
        if ((int)r.size() != fan.dim)
            throw HypothesisError("ray " + std::to_string(i) + " has wrong dimension");
        Int g = 0;
        for (const auto& x : r) g = gcd_int(g, x);
        if (g != 1)
            throw HypothesisError("ray " + std::to_string(i) + " = " + vec_str(r) +
                                  " is not primitive");
    }
    for (std::size_t i = 0; i < fan.rays.size(); ++i)
        for (std::size_t j = i + 1; j < fan.rays.size(); ++j)
            if (fan.rays[i] == fan.rays[j])
                throw HypothesisError("rays " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are identical");
    std::set<std::vector<int>> seen;
    for (std::size_t k = 0; k < fan.max_cones.size(); ++k) {
        auto cone = fan.max_cones[k];
        if (cone.empty())
            throw HypothesisError("maximal cone " + std::to_string(k) + " is empty");
        for (int idx : cone)
            if (idx < 0 || idx >= (int)fan.rays.size())
                throw HypothesisError("maximal cone " + std::to_string(k) +
                                      " references ray " + std::to_string(idx) +
                                      " out of range");
        std::sort(cone.begin(), cone.end());
        if (std::adjacent_find(cone.begin(), cone.end()) != cone.end())
            throw HypothesisError("maximal cone " + std::to_string(k) +
                                  " repeats a ray index");
        if (!seen.insert(cone).second)
            throw HypothesisError("maximal cone " + std::to_string(k) +
                                  " duplicates an earlier cone");
    }
    // listed cones must really be maximal among themselves
    auto as_set = [](const std::vector<int>& c) {
        return std::set<int>(c.begin(), c.end());
    };
    for (std::size_t i = 0; i < fan.max_cones.size(); ++i)
        for (std::size_t j = 0; j < fan.max_cones.size(); ++j) {
            if (i == j) continue;
            auto a = as_set(fan.max_cones[i]);
            auto b = as_set(fan.max_cones[j]);
            if (a != b && std::includes(b.begin(), b.end(), a.begin(), a.end()))
                throw HypothesisError("cone " + std::to_string(i) +
                                      " is contained in cone " + std::to_string(j));
        }
}

inline IntMat cone_matrix(const Fan& fan, const std::vector<int>& cone) {
    IntMat m(cone.size(), std::vector<Int>(fan.dim));
    for (std::size_t i = 0; i < cone.size(); ++i) m[i] = fan.rays[cone[i]];
    return m;
}

// membership of a direction u in the cone spanned by the (independent,
// full-dimensional) generators; returns {member, interior}
inline std::pair<bool, bool> cone_membership(const Fan& fan, const std::vector<int>& cone,
                                             const std::vector<Int>& u) {
    RatMat A(fan.dim, RatVec(fan.dim));
    RatVec b(fan.dim);
    for (int row = 0; row < fan.dim; ++row) {
        for (std::size_t col = 0; col < cone.size(); ++col)
            A[row][col] = Rat(fan.rays[cone[col]][row]);
        b[row] = Rat(u[row]);
    }
    auto sol = solve_linear(A, b);
    if (!sol) return {false, false};
    bool member = true, interior = true;
    for (const auto& lam : *sol) {
        if (lam < 0) member = false;
        if (lam <= 0) interior = false;
    }
    return {member, member && interior};
}

} // namespace detail

/* Validation verdicts:
 *   - simplicial: every maximal cone has linearly independent generators
 *   - smooth: every maximal cone generates a saturated sublattice (all Smith
 *     pivots equal 1; |det| = 1 for full-dimensional cones)
 *   - complete: every wall lies on exactly two maximal cones, the wall graph
 *     is connected, and a deterministic sample of random rational directions
 *     is covered with no two cones claiming the same interior point
 * Structurally malformed input (non-primitive ray, duplicate ray, bad cone
 * index, ...) is rejected with an exception naming the offender. */
inline FanCheckReport validate_fan(const Fan& fan,
                                   std::uint64_t seed = kValidationSeed,
                                   int ndirections = kValidationDirections) {
    detail::check_fan_structure(fan);
    FanCheckReport rep;

    rep.simplicial = true;
    for (std::size_t k = 0; k < fan.num_cones(); ++k) {
        const auto& cone = fan.max_cones[k];
        RatMat rows;
        for (int idx : cone) {
            RatVec row(fan.dim);
            for (int j = 0; j < fan.dim; ++j) row[j] = Rat(fan.rays[idx][j]);
            rows.push_back(row);
        }
        if (rat_rank(rows) != cone.size()) {
            rep.simplicial = false;
            rep.reasons.push_back("maximal cone " + std::to_string(k) +
                                  " has dependent generators");
        }
    }

    rep.smooth = rep.simplicial;
    if (rep.simplicial) {
        for (std::size_t k = 0; k < fan.num_cones(); ++k) {
            auto snf = smith_normal_form(detail::cone_matrix(fan, fan.max_cones[k]));
            bool sat = snf.rank == fan.max_cones[k].size();
            for (std::size_t i = 0; sat && i < snf.rank; ++i)
                if (snf.S[i][i] != 1) sat = false;
            if (!sat) {
                rep.smooth = false;
                std::string d;
                if (fan.max_cones[k].size() == (std::size_t)fan.dim)
                    d = " (|det| = " +
                        Int(abs(int_det(detail::cone_matrix(fan, fan.max_cones[k])))).get_str() + ")";
                rep.reasons.push_back("maximal cone " + std::to_string(k) +
                                      " spans a proper sublattice" + d);
            }
        }
    }

    rep.complete = true;
    for (std::size_t k = 0; k < fan.num_cones(); ++k)
        if (fan.max_cones[k].size() != (std::size_t)fan.dim) {
            rep.complete = false;
            rep.reasons.push_back("maximal cone " + std::to_string(k) +
                                  " is not full-dimensional");
        }

    if (rep.complete) {
        // wall condition: every (dim-1)-subset of a maximal cone lies on
        // exactly two maximal cones
        std::vector<std::uint64_t> cone_masks;
        for (const auto& cone : fan.max_cones) {
            std::uint64_t m = 0;
            for (int idx : cone) m |= (std::uint64_t)1 << idx;
            cone_masks.push_back(m);
        }
        std::map<std::vector<int>, std::vector<std::size_t>> wall_owners;
        for (std::size_t k = 0; k < fan.num_cones(); ++k) {
            const auto& cone = fan.max_cones[k];
            for (std::size_t drop = 0; drop < cone.size(); ++drop) {
                std::vector<int> face;
                for (std::size_t i = 0; i < cone.size(); ++i)
                    if (i != drop) face.push_back(cone[i]);
                std::sort(face.begin(), face.end());
                wall_owners[face]; // ensure presence even in dim 1
            }
        }
        for (auto& [face, owners] : wall_owners) {
            std::uint64_t fm = 0;
            for (int idx : face) fm |= (std::uint64_t)1 << idx;
            for (std::size_t k = 0; k < fan.num_cones(); ++k)
                if ((fm & cone_masks[k]) == fm) owners.push_back(k);
            if (owners.size() != 2) {
                rep.complete = false;
                rep.reasons.push_back("wall " + detail::cone_str(face) + " lies on " +
                                      std::to_string(owners.size()) +
                                      " maximal cone(s), expected 2");
            }
        }
        if (rep.complete) {
            // connectivity of the wall graph
            std::vector<char> vis(fan.num_cones(), 0);
            std::vector<std::size_t> stack{0};
            vis[0] = 1;
            while (!stack.empty()) {
                std::size_t k = stack.back();
                stack.pop_back();
                for (const auto& [face, owners] : wall_owners)
                    if (owners.size() == 2 && (owners[0] == k || owners[1] == k)) {
                        std::size_t o = owners[0] == k ? owners[1] : owners[0];
                        if (!vis[o]) {
                            vis[o] = 1;
                            stack.push_back(o);
                        }
                    }
            }
            for (std::size_t k = 0; k < fan.num_cones(); ++k)
                if (!vis[k]) {
                    rep.complete = false;
                    rep.reasons.push_back("support is disconnected (cone " +
                                          std::to_string(k) + " unreachable)");
                    break;
                }
        }
        if (rep.complete && rep.simplicial) {
            // randomized covering confirmation
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<long> comp(-99, 99);
            int bad = 0;
            for (int trial = 0; trial < ndirections && bad < 4; ++trial) {
                std::vector<Int> u(fan.dim);
                bool zero = true;
                for (auto& x : u) {
                    x = comp(rng);
                    if (x != 0) zero = false;
                }
                if (zero) continue;
                int members = 0, interiors = 0;
                for (const auto& cone : fan.max_cones) {
                    auto [mem, interior] = detail::cone_membership(fan, cone, u);
                    members += mem;
                    interiors += interior;
                }
                if (members == 0) {
                    rep.complete = false;
                    rep.reasons.push_back("direction " + detail::vec_str(u) +
                                          " is not covered by any maximal cone");
                    ++bad;
                } else if (interiors > 1) {
                    rep.complete = false;
                    rep.reasons.push_back("direction " + detail::vec_str(u) +
                                          " lies in the interior of " +
                                          std::to_string(interiors) + " cones");
                    ++bad;
                }
            }
        }
    }
    return rep;
}

inline void require_smooth_complete(const Fan& fan) {
    auto rep = validate_fan(fan);
    if (!rep.ok())
        throw HypothesisError("fan '" + (fan.name.empty() ? "?" : fan.name) +
                              "' rejected: " + rep.reason_summary());
}

/* Divisor class data from the cokernel of the ray-character pairing.  For a
 * smooth complete fan the class group is free of rank N - dim; class_matrix
 * projects divisor coefficient vectors onto a chosen basis and section maps
 * a class back to a representative divisor. */
struct PicardData {
    std::size_t num_rays = 0;
    int dim = 0;
    std::size_t rank = 0;
    IntMat class_matrix;                      // rank x N
    IntMat section;                           // N x rank, class_matrix * section = I
    std::vector<std::vector<Int>> ray_classes; // per ray, length rank
    std::vector<Int> anticanonical_class;
};

inline std::vector<Int> divisor_class(const PicardData& pic, const std::vector<Int>& coeffs) {
    if (coeffs.size() != pic.num_rays)
        throw ConfigError("divisor coefficient vector has wrong length");
    std::vector<Int> cls(pic.rank, 0);
    for (std::size_t i = 0; i < pic.rank; ++i)
        for (std::size_t j = 0; j < pic.num_rays; ++j)
            cls[i] += pic.class_matrix[i][j] * coeffs[j];
    return cls;
}

inline PicardData picard_basis(const Fan& fan) {
    require_smooth_complete(fan);
    std::size_t n = fan.num_rays();
    IntMat A(n, std::vector<Int>(fan.dim));
    for (std::size_t i = 0; i < n; ++i) A[i] = fan.rays[i];
    auto snf = smith_normal_form(A);
    if (snf.rank != (std::size_t)fan.dim)
        throw InternalError("ray matrix of a complete fan must have full rank");
    for (std::size_t i = 0; i < snf.rank; ++i)
        if (snf.S[i][i] != 1)
            throw InternalError("divisor class group has torsion; fan cannot be smooth");

    PicardData pic;
    pic.num_rays = n;
    pic.dim = fan.dim;
    pic.rank = n - fan.dim;
    pic.class_matrix.assign(pic.rank, std::vector<Int>(n));
    for (std::size_t i = 0; i < pic.rank; ++i)
        pic.class_matrix[i] = snf.U[fan.dim + i];
    pic.section.assign(n, std::vector<Int>(pic.rank));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < pic.rank; ++j)
            pic.section[i][j] = snf.Uinv[i][fan.dim + j];
    pic.ray_classes.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        pic.ray_classes[j].resize(pic.rank);
        for (std::size_t i = 0; i < pic.rank; ++i)
            pic.ray_classes[j][i] = pic.class_matrix[i][j];
    }
    pic.anticanonical_class.assign(pic.rank, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < pic.rank; ++i)
            pic.anticanonical_class[i] += pic.ray_classes[j][i];
    return pic;
}

/* For a maximal cone sigma and divisor D = sum a_rho D_rho, the character m
 * with <m, n_rho> = a_rho on the cone's rays, and the linearly equivalent
 * divisor D - div(chi^m) whose coefficients vanish on sigma. */
struct TwistedDivisor {
    std::vector<Int> character; // length dim
    std::vector<Int> coeffs;    // length N, zero on the cone's rays
};

inline TwistedDivisor twisted_divisor(const Fan& fan, std::size_t cone_idx,
                                      const std::vector<Int>& coeffs) {
    if (cone_idx >= fan.num_cones())
        throw ConfigError("cone index " + std::to_string(cone_idx) + " out of range");
    if (coeffs.size() != fan.num_rays())
        throw ConfigError("divisor coefficient vector has wrong length");
    const auto& cone = fan.max_cones[cone_idx];
    if (cone.size() != (std::size_t)fan.dim)
        throw HypothesisError("cone " + std::to_string(cone_idx) +
                              " is not full-dimensional");
    RatMat A(fan.dim, RatVec(fan.dim));
    RatVec b(fan.dim);
    for (int row = 0; row < fan.dim; ++row) {
        for (int col = 0; col < fan.dim; ++col)
            A[row][col] = Rat(fan.rays[cone[row]][col]);
        b[row] = Rat(coeffs[cone[row]]);
    }
    auto sol = solve_linear(A, b);
    if (!sol) throw HypothesisError("cone " + std::to_string(cone_idx) +
                                    " has dependent generators");
    TwistedDivisor out;
    out.character.resize(fan.dim);
    for (int i = 0; i < fan.dim; ++i) {
        if ((*sol)[i].get_den() != 1)
            throw InternalError("character is not integral; fan cannot be smooth");
        out.character[i] = (*sol)[i].get_num();
    }
    out.coeffs.resize(fan.num_rays());
    for (std::size_t j = 0; j < fan.num_rays(); ++j) {
        Int pairing = 0;
        for (int i = 0; i < fan.dim; ++i) pairing += out.character[i] * fan.rays[j][i];
        out.coeffs[j] = coeffs[j] - pairing;
    }
    return out;
}

// exponents of the anticanonical divisor twisted into the cone; all
// nonnegative exactly when -K is generated by global sections
inline std::vector<Int> anticanonical_exponents(const Fan& fan, std::size_t cone_idx) {
    std::vector<Int> ones(fan.num_rays(), 1);
    return twisted_divisor(fan, cone_idx, ones).coeffs;
}

struct GlobalGenVerdict {
    bool generated = true;
    std::size_t cone = 0; // arg min over (cone, ray), first hit wins
    std::size_t ray = 0;
    Int min_exponent;
};

inline GlobalGenVerdict check_globally_generated(const Fan& fan) {
    GlobalGenVerdict v;
    bool first = true;
    for (std::size_t k = 0; k < fan.num_cones(); ++k) {
        auto exps = anticanonical_exponents(fan, k);
        for (std::size_t j = 0; j < exps.size(); ++j)
            if (first || exps[j] < v.min_exponent) {
                first = false;
                v.min_exponent = exps[j];
                v.cone = k;
                v.ray = j;
            }
    }
    v.generated = !first && v.min_exponent >= 0;
    return v;
}

/* Smallest cardinality of a set of rays not contained in any single cone of
 * the fan; controls the decay of the generalized Moebius function. */
inline int f_invariant(const Fan& fan) {
    std::size_t n = fan.num_rays();
    if (n > 40) throw BudgetError("f-invariant search limited to 40 rays");
    std::vector<std::uint64_t> cone_masks;
    for (const auto& cone : fan.max_cones) {
        std::uint64_t m = 0;
        for (int idx : cone) m |= (std::uint64_t)1 << idx;
        cone_masks.push_back(m);
    }
    for (std::size_t size = 2; size <= n; ++size) {
        std::vector<int> sel(n, 0);
        std::fill(sel.begin(), sel.begin() + size, 1);
        // iterate subsets of the given size in decreasing selector order
        do {
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (sel[i]) mask |= (std::uint64_t)1 << i;
            bool contained = false;
            for (auto cm : cone_masks)
                if ((mask & cm) == mask) {
                    contained = true;
                    break;
                }
            if (!contained) return (int)size;
        } while (std::prev_permutation(sel.begin(), sel.end()));
    }
    throw InternalError("no uncovered ray set found; fan cannot be complete");
}

} // namespace toricount
