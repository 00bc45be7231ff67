#include "cusplab/json_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace cusplab::io {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_checked(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("json: parse error: ") + e.what());
    }
}

[[noreturn]] void fail(const std::string& what, const std::exception& e) {
    throw std::invalid_argument("json: bad " + what + ": " + e.what());
}

Rat rat_field(const ojson& j) {
    if (!j.is_string()) throw std::invalid_argument("json: rationals must be \"p/q\" strings");
    const auto s = j.get<std::string>();
    const auto q = rat_from_string(s);
    if (!q) throw std::invalid_argument("json: bad rational '" + s + "'");
    return *q;
}

ojson rat_json(const Rat& q) { return rat_to_string(q); }

std::vector<int> int_array(const ojson& j) {
    std::vector<int> out;
    if (!j.is_array()) throw std::invalid_argument("json: expected an integer array");
    for (const auto& e : j) out.push_back(e.get<int>());
    return out;
}

ojson real_json(const Real& x) { return real_to_decimal(x); }

Real real_field(const ojson& j) {
    if (!j.is_string()) throw std::invalid_argument("json: reals must be decimal strings");
    return real_from_decimal(j.get<std::string>());
}

RVec real_array(const ojson& j) {
    RVec out;
    if (!j.is_array()) throw std::invalid_argument("json: expected a decimal array");
    for (const auto& e : j) out.push_back(real_field(e));
    return out;
}

ojson parabolic_json(const ParabolicSubgroup& P) { return ojson(P.jumps); }

ParabolicSubgroup parabolic_field(int d, const ojson& j) {
    return ParabolicSubgroup(d, int_array(j));
}

}  // namespace

std::string real_to_decimal(const Real& x) {
    return x.str(0, std::ios_base::scientific);
}

Real real_from_decimal(const std::string& s) {
    try {
        return at_working_precision(Real(s.c_str()));
    } catch (const std::exception& e) {
        throw std::invalid_argument("json: bad decimal '" + s + "': " + e.what());
    }
}

std::string flow_to_json(const DiagonalFlow& flow) {
    ojson j;
    j["d"] = flow.d;
    ojson a = ojson::array();
    for (const auto& q : flow.alpha) a.push_back(rat_json(q));
    j["alpha"] = std::move(a);
    return j.dump();
}

DiagonalFlow flow_from_json(const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        const int d = j.at("d").get<int>();
        QVec a;
        for (const auto& e : j.at("alpha")) a.push_back(rat_field(e));
        return DiagonalFlow(d, std::move(a));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("flow", e);
    }
}

std::string lattice_to_json(const Lattice& x) {
    ojson j;
    j["d"] = x.d;
    ojson cols = ojson::array();
    for (int c = 0; c < x.d; ++c) {
        ojson col = ojson::array();
        for (int i = 0; i < x.d; ++i) col.push_back(rat_json(x.basis(i, c)));
        cols.push_back(std::move(col));
    }
    j["basis"] = std::move(cols);
    return j.dump();
}

Lattice lattice_from_json(const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        const int d = j.at("d").get<int>();
        if (d < 1) throw std::invalid_argument("json: lattice dimension must be positive");
        const auto& cols = j.at("basis");
        if (!cols.is_array() || static_cast<int>(cols.size()) != d)
            throw std::invalid_argument("json: basis must list d columns");
        QMat b(d, d);
        for (int c = 0; c < d; ++c) {
            const auto& col = cols[static_cast<std::size_t>(c)];
            if (!col.is_array() || static_cast<int>(col.size()) != d)
                throw std::invalid_argument("json: basis columns must have d entries");
            for (int i = 0; i < d; ++i) b(i, c) = rat_field(col[static_cast<std::size_t>(i)]);
        }
        return Lattice(std::move(b));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("lattice", e);
    }
}

std::string orientation_to_json(const Orientation& o) {
    ojson j;
    j["jumps"] = parabolic_json(o.P);
    j["rep"] = ojson(o.rep);
    return j.dump();
}

Orientation orientation_from_json(const DiagonalFlow& flow, const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        const auto P = parabolic_field(flow.d, j.at("jumps"));
        return coset_of(flow, P, int_array(j.at("rep")));
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("orientation", e);
    }
}

std::string tolerance_to_json(const ToleranceConfig& cfg) {
    ojson j;
    j["delta"] = real_json(cfg.delta);
    j["delta_prime"] = real_json(cfg.delta_prime);
    j["r"] = real_json(cfg.r);
    j["eta0"] = real_json(cfg.eta0);
    j["eps0"] = real_json(cfg.eps0);
    j["root_tol"] = real_json(cfg.root_tol);
    j["precision"] = cfg.precision;
    return j.dump();
}

ToleranceConfig tolerance_from_json(const std::string& text, int d) {
    const ojson j = parse_checked(text);
    try {
        ToleranceConfig cfg;
        cfg.delta = real_field(j.at("delta"));
        cfg.delta_prime = real_field(j.at("delta_prime"));
        cfg.r = real_field(j.at("r"));
        cfg.eta0 = real_field(j.at("eta0"));
        cfg.eps0 = real_field(j.at("eps0"));
        cfg.root_tol = real_field(j.at("root_tol"));
        cfg.precision = j.at("precision").get<int>();
        cfg.validate(d);
        return cfg;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("tolerance", e);
    }
}

std::string classification_to_json(const ClassifyResult& res, const MinimaResult& minima) {
    ojson j;
    j["P"] = parabolic_json(res.P);
    j["Q"] = parabolic_json(res.Q);
    if (res.orientation) {
        ojson w;
        w["rep"] = ojson(res.orientation->rep);
        j["orientation"] = std::move(w);
    } else {
        j["orientation"] = nullptr;
    }
    const int d = static_cast<int>(minima.lambda.size());
    ojson lam = ojson::array(), et = ojson::array(), ht = ojson::array();
    for (int i = 0; i < d; ++i) {
        lam.push_back(real_json(minima.lambda[static_cast<std::size_t>(i)]));
        ht.push_back(real_json(-real_log(minima.lambda[static_cast<std::size_t>(i)])));
    }
    for (int l = 1; l < d; ++l) et.push_back(real_json(eta(minima, l)));
    j["minima"] = std::move(lam);
    j["eta"] = std::move(et);
    j["height"] = std::move(ht);
    j["compact"] = res.compact;
    return j.dump();
}

ClassificationRow classification_from_json(const DiagonalFlow& flow, const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        ClassificationRow row;
        row.result.P = parabolic_field(flow.d, j.at("P"));
        row.result.Q = parabolic_field(flow.d, j.at("Q"));
        const auto& w = j.at("orientation");
        if (!w.is_null())
            row.result.orientation = coset_of(flow, row.result.Q, int_array(w.at("rep")));
        row.result.compact = j.at("compact").get<bool>();
        row.minima = real_array(j.at("minima"));
        row.eta = real_array(j.at("eta"));
        row.height = real_array(j.at("height"));
        return row;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("classification", e);
    }
}

std::string coding_to_json(const Coding& c) {
    ojson runs = ojson::array();
    const long N = c.N;
    long n = -N;
    while (n <= N) {
        const auto& v = c.at(n);
        long end = n;
        while (end < N && c.at(end + 1) == v) ++end;
        ojson run;
        run["start"] = n;
        run["end"] = end;
        run["P"] = parabolic_json(v.first);
        if (v.second)
            run["w"] = ojson(v.second->rep);
        else
            run["w"] = nullptr;
        runs.push_back(std::move(run));
        n = end + 1;
    }
    return runs.dump();
}

Coding coding_from_json(const DiagonalFlow& flow, const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        if (!j.is_array() || j.empty())
            throw std::invalid_argument("json: coding must be a non-empty array of runs");
        const long start = j.front().at("start").get<long>();
        const long end = j.back().at("end").get<long>();
        if (start != -end || end < 0)
            throw std::invalid_argument("json: coding runs must cover a symmetric window");
        Coding c;
        c.N = end;
        long expect = start;
        for (const auto& run : j) {
            const long s = run.at("start").get<long>();
            const long e = run.at("end").get<long>();
            if (s != expect || e < s)
                throw std::invalid_argument("json: coding runs must be contiguous and sorted");
            const auto P = parabolic_field(flow.d, run.at("P"));
            std::optional<Orientation> w;
            if (!run.at("w").is_null()) w = coset_of(flow, P, int_array(run.at("w")));
            for (long k = s; k <= e; ++k) c.values.emplace_back(P, w);
            expect = e + 1;
        }
        if (expect != end + 1)
            throw std::invalid_argument("json: coding runs must cover the window");
        return c;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("coding", e);
    }
}

std::string budget_to_json(const BudgetReport& rep, const BudgetPins& pins) {
    ojson j;
    ojson counts;
    counts["j"] = rep.j_count;
    counts["j_prime"] = rep.j_prime_count;
    counts["unoriented"] = rep.unoriented_count;
    counts["clipped"] = rep.clipped_intervals;
    j["counts"] = std::move(counts);
    ojson ratios;
    ratios["interval_count"] = real_json(rep.ratio_interval_count);
    ratios["err_endpoints"] = real_json(rep.ratio_err_endpoints);
    ratios["height_drift"] = real_json(rep.ratio_height_drift);
    ratios["unoriented"] = real_json(rep.ratio_unoriented);
    j["ratios"] = std::move(ratios);
    ojson pj;
    pj["interval_count"] = pins.interval_count;
    pj["err_endpoints"] = pins.err_endpoints;
    pj["height_drift"] = pins.height_drift;
    pj["unoriented"] = pins.unoriented;
    j["pins"] = std::move(pj);
    ojson pass;
    pass["interval_count"] = rep.ratio_interval_count <= Real(pins.interval_count);
    pass["err_endpoints"] = rep.ratio_err_endpoints <= Real(pins.err_endpoints);
    pass["height_drift"] = rep.ratio_height_drift <= Real(pins.height_drift);
    pass["unoriented"] = rep.ratio_unoriented <= Real(pins.unoriented);
    j["pass"] = std::move(pass);
    j["telescope_norm"] = real_json(rep.telescope_norm);
    j["height_drift_norm"] = real_json(rep.height_drift_norm);
    j["small_n_warning"] = rep.small_n_warning;
    return j.dump();
}

BudgetReport budget_from_json(const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        BudgetReport rep;
        const auto& counts = j.at("counts");
        rep.j_count = counts.at("j").get<long>();
        rep.j_prime_count = counts.at("j_prime").get<long>();
        rep.unoriented_count = counts.at("unoriented").get<long>();
        rep.clipped_intervals = counts.at("clipped").get<long>();
        const auto& ratios = j.at("ratios");
        rep.ratio_interval_count = real_field(ratios.at("interval_count"));
        rep.ratio_err_endpoints = real_field(ratios.at("err_endpoints"));
        rep.ratio_height_drift = real_field(ratios.at("height_drift"));
        rep.ratio_unoriented = real_field(ratios.at("unoriented"));
        rep.telescope_norm = real_field(j.at("telescope_norm"));
        rep.height_drift_norm = real_field(j.at("height_drift_norm"));
        rep.small_n_warning = j.at("small_n_warning").get<bool>();
        return rep;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("budget report", e);
    }
}

std::string bound_rows_to_json(const DiagonalFlow& flow, const std::vector<BoundRow>& rows) {
    (void)flow;
    ojson out = ojson::array();
    for (const auto& row : rows) {
        ojson r;
        r["P"] = parabolic_json(row.o.P);
        r["rep"] = ojson(row.o.rep);
        r["h"] = rat_json(row.h);
        ojson pi = ojson::array();
        for (const auto& q : row.pi) pi.push_back(rat_json(q));
        r["pi"] = std::move(pi);
        r["h_phi"] = rat_json(row.hphi);
        r["h_dec"] = to_double(to_real(row.h));
        r["h_phi_dec"] = to_double(to_real(row.hphi));
        out.push_back(std::move(r));
    }
    return out.dump();
}

std::vector<BoundRow> bound_rows_from_json(const DiagonalFlow& flow, const std::string& text) {
    const ojson j = parse_checked(text);
    try {
        if (!j.is_array()) throw std::invalid_argument("json: bound rows must be an array");
        std::vector<BoundRow> rows;
        for (const auto& r : j) {
            BoundRow row{coset_of(flow, parabolic_field(flow.d, r.at("P")),
                                  int_array(r.at("rep"))),
                         rat_field(r.at("h")), QVec{}, rat_field(r.at("h_phi"))};
            for (const auto& q : r.at("pi")) row.pi.push_back(rat_field(q));
            rows.push_back(std::move(row));
        }
        return rows;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        fail("bound rows", e);
    }
}

}  // namespace cusplab::io
