#pragma once

#include <cstdio>
#include <string>

#include <json.hpp>

#include "toricount/peyre.hpp"
#include "toricount/torsor.hpp"

namespace toricount {

namespace detail {

inline std::string fixed3(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

} // namespace detail

/* Count reports are CSV so they can be fed straight into plotting tools.
 * Columns: B,N_direct,N_moebius,per_class_counts,seconds and, when a leading
 * constant is supplied, predicted,ratio.  per_class_counts are the raw
 * per-class-tuple coprime counts (before the unit-group division) joined by
 * '|' in lexicographic tuple order.  The ratio is measured against the
 * midpoint of the constant's interval, and the interval itself is emitted in
 * '#' comment lines so no report hides the truncation error.  The seconds
 * column is the wall time of the whole batched run (all B values are swept
 * in one enumeration) and stays 0.000 unless timings were requested, keeping
 * default outputs byte-reproducible. */
inline std::string count_report_csv(const CountReport& rep,
                                    const LeadingConstant* C = nullptr) {
    std::string out;
    out += "# fan=" + rep.fan_name + " D=" + std::to_string(rep.D) +
           " r=" + std::to_string(rep.rank) + " h=" + std::to_string(rep.class_number) +
           " omega=" + std::to_string(rep.unit_count) + "\n";
    Real mid(0L);
    if (C) {
        mid = (C->lower + C->upper) / Real(2L);
        out += "# C_numeric = " + C->value.str() + "\n";
        out += "# C_interval = [" + C->lower.str() + ", " + C->upper.str() + "]\n";
    }
    out += "B,N_direct,N_moebius,per_class_counts,seconds";
    if (C) out += ",predicted,ratio";
    out += "\n";
    for (std::size_t bi = 0; bi < rep.Bs.size(); ++bi) {
        out += rep.Bs[bi].get_str() + ",";
        out += rep.totals_direct[bi].get_str() + ",";
        if (!rep.totals_moebius.empty()) out += rep.totals_moebius[bi].get_str();
        out += ",";
        for (std::size_t t = 0; t < rep.cell_counts.size(); ++t) {
            if (t) out += "|";
            out += rep.cell_counts[t][bi].get_str();
        }
        out += "," + detail::fixed3(rep.elapsed_seconds);
        if (C) {
            if (rep.Bs[bi] > 1) {
                Real pred = mid;
                pred *= Real(rep.Bs[bi]);
                if (rep.rank >= 2) pred *= Real(rep.Bs[bi]).log().pow_si((long)rep.rank - 1);
                Real ratio = Real(rep.totals_direct[bi]) / pred;
                out += "," + pred.str(17) + "," + ratio.str(17);
            } else {
                out += ",,"; // main term undefined at B <= 1
            }
        }
        out += "\n";
    }
    return out;
}

inline nlohmann::ordered_json kappa_json(const KappaEstimate& k) {
    nlohmann::ordered_json j;
    j["value"] = k.value.str();
    j["prime_norm_bound"] = k.prime_bound;
    j["tail_bound"] = Real(k.tail_bound).str();
    return j;
}

inline nlohmann::ordered_json constant_report_json(const LeadingConstant& C) {
    nlohmann::ordered_json j;
    j["alpha"] = rat_str(C.alpha);
    j["kappa"] = kappa_json(C.kappa);
    j["h"] = C.class_number;
    j["omega"] = C.unit_count;
    j["disc"] = C.disc.get_si();
    j["N"] = C.n_rays;
    j["r"] = C.rank;
    j["max_cones"] = C.n_cones;
    j["C_numeric"] = C.value.str();
    j["C_interval"] = {C.lower.str(), C.upper.str()};
    return j;
}

inline nlohmann::ordered_json check_report_json(const Fan& fan, const FanCheckReport& rep) {
    nlohmann::ordered_json j;
    j["name"] = fan.name;
    j["dim"] = fan.dim;
    j["rays"] = fan.num_rays();
    j["max_cones"] = fan.num_cones();
    j["simplicial"] = rep.simplicial;
    j["smooth"] = rep.smooth;
    j["complete"] = rep.complete;
    j["ok"] = rep.ok();
    j["reasons"] = rep.reasons;
    if (rep.ok()) {
        j["r"] = picard_basis(fan).rank;
        j["f"] = f_invariant(fan);
        auto v = check_globally_generated(fan);
        j["globally_generated"] = v.generated;
        j["min_exponent"] = v.min_exponent.get_si();
    }
    return j;
}

} // namespace toricount
