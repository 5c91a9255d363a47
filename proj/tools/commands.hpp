#pragma once
// Subcommand front end for the polysieve library.
//
// Every report is a JSON object {command, version, config, result, duration_ms};
// `config` echoes the fully resolved parameters (including the seed) and
// `duration_ms` is the only field that varies between identical runs.
// CSV and gnuplot renderings are derived from the same result object.
//
// CSV columns per subcommand:
//   congruence-count   count,count_direct,count_residue_table,kerr_bound,ratio,r,k
//   farey-stats        N,M,comparator,ratio
//   sieve-scan         N,empirical,trivial_bound,zhao_conjecture,old_bound,new_bound,new_bound_applicable
//   exponents          k,ell,r,rho,level_exponent,k_times_level,ellcond_rhs,conjectural_level_exponent,maynard_rhs
//   check-setting      factor,k,ell,r,rho,ellcond_rhs,ell_condition,h
//   bv-sum             value,comparator,tuples,excluded_bad,nonpositive,nonzero_weight,eps_bad
//   meanvalue-sum      value,tuples,skipped_unit,negative_moduli,primitive_characters
//   norm-form          polynomial
//   prime-value-sieve  prime,multiplicity
//   corollary-search   p,d,q
//   bad-moduli         count,total,threshold,ratio

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <polysieve/polysieve.hpp>

namespace polysieve::cli {

using Json = nlohmann::ordered_json;

struct ExperimentConfig {
    std::string command;
    std::vector<std::string> polys;
    std::string f;
    u64 Q = 1;
    std::vector<u64> N_grid;
    u64 M = 0;
    double x = 10.0;
    u64 X = 100;
    std::string theta = "2/5";
    std::string eps;
    std::string eps_bad;
    double A = 2.0;
    std::string filter = "none"; // none | star | at_least:<rational>
    std::string family = "sign";
    unsigned k = 0;
    unsigned ell = 0;
    i64 a = 1;
    u64 m = 1;
    std::vector<i64> K;
    u64 H = 1;
    i64 L = 0;
    u64 R = 1;
    std::uint64_t seed = 0;
    std::string format = "json";
    unsigned workers = default_workers();
    std::string out;
};

/// Result of one run: the JSON report plus an optional table for CSV / gnuplot.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::vector<MvPoly> parse_factor_list(const std::vector<std::string>& texts) {
    if (texts.empty()) throw InputError("at least one polynomial is required (--P)");
    std::size_t nv = 1;
    for (const auto& t : texts) nv = std::max(nv, parse_polynomial(t).num_vars());
    std::vector<MvPoly> out;
    for (const auto& t : texts) out.push_back(parse_polynomial(t, nv));
    return out;
}

inline MvPoly single_poly(const ExperimentConfig& c) {
    if (c.polys.size() != 1) throw InputError("exactly one polynomial is required (--P)");
    return parse_polynomial(c.polys.front());
}

inline ModulusFilter make_filter(const std::string& spec, u64 Q, unsigned k) {
    if (spec == "none") return ModulusFilter::none();
    if (spec == "star") return ModulusFilter::star_default(Q, k);
    const std::string prefix = "at_least:";
    if (spec.rfind(prefix, 0) == 0) return ModulusFilter::at_least(parse_rational(spec.substr(prefix.size())));
    throw InputError("unknown filter '" + spec + "' (expected none, star or at_least:<rational>)");
}

inline NumberFieldSpec field_spec(const ExperimentConfig& c) {
    if (c.f.empty()) throw InputError("--f is required");
    return NumberFieldSpec::from_polynomial(parse_univariate(c.f), c.k);
}

inline std::vector<u64> default_N_grid(const ExperimentConfig& c, unsigned k) {
    if (!c.N_grid.empty()) return c.N_grid;
    const u64 Qk = static_cast<u64>(checked_i64(boost::multiprecision::pow(BigInt(c.Q), k), "Q^k"));
    return {Qk, 2 * Qk, static_cast<u64>(checked_i64(BigInt(Qk) * Qk, "Q^2k"))};
}

} // namespace detail

inline Json config_json(const ExperimentConfig& c) {
    Json j;
    j["command"] = c.command;
    j["polys"] = c.polys;
    j["f"] = c.f;
    j["Q"] = c.Q;
    j["N"] = c.N_grid;
    j["M"] = c.M;
    j["x"] = c.x;
    j["X"] = c.X;
    j["theta"] = c.theta;
    j["eps"] = c.eps;
    j["eps_bad"] = c.eps_bad;
    j["A"] = c.A;
    j["filter"] = c.filter;
    j["family"] = c.family;
    j["k"] = c.k;
    j["ell"] = c.ell;
    j["a"] = c.a;
    j["m"] = c.m;
    j["K"] = c.K;
    j["H"] = c.H;
    j["L"] = c.L;
    j["R"] = c.R;
    j["seed"] = c.seed;
    j["format"] = c.format;
    j["workers"] = c.workers;
    return j;
}

/// Runs one command; fills `result` and `table` (table may stay empty).
inline void dispatch(const ExperimentConfig& c, Json& result, Table& table) {
    ExecOptions opts;
    opts.workers = std::max(1u, c.workers);
    using detail::fmt;
    using detail::number_or_null;

    if (c.command == "congruence-count") {
        CongruenceInstance inst;
        inst.P = detail::single_poly(c);
        inst.a = c.a;
        inst.m = c.m;
        inst.K = c.K.empty() ? std::vector<i64>(inst.P.num_vars(), 0) : c.K;
        inst.H = c.H;
        inst.L = c.L;
        inst.R = c.R;
        const auto kerr = kerr_bound(inst, opts);
        const u64 direct = count_solutions_direct(inst, opts);
        const u64 tablecount = count_solutions_residue_table(inst, opts);
        result["polynomial"] = inst.P.to_string();
        result["count"] = kerr.count;
        result["count_direct"] = direct;
        result["count_residue_table"] = tablecount;
        result["k"] = kerr.k;
        result["r"] = kerr.r;
        result["kerr_bound"] = number_or_null(kerr.bound);
        result["ratio"] = number_or_null(kerr.ratio);
        table.header = {"count", "count_direct", "count_residue_table", "kerr_bound", "ratio", "r", "k"};
        table.rows.push_back({std::to_string(kerr.count), std::to_string(direct), std::to_string(tablecount),
                              fmt(kerr.bound), fmt(kerr.ratio), std::to_string(kerr.r), std::to_string(kerr.k)});
    } else if (c.command == "farey-stats") {
        const MvPoly P = detail::single_poly(c);
        const unsigned k = P.total_degree();
        const auto F = build_farey(P, c.Q, detail::make_filter(c.filter, c.Q, k), opts);
        result["polynomial"] = P.to_string();
        result["distinct_count"] = F.distinct_count;
        result["total_count"] = F.total_count;
        result["skipped_small"] = F.scan.skipped_small;
        result["skipped_filter"] = F.scan.skipped_filter;
        result["min_spacing"] = F.distinct_count >= 2 ? Json(to_string(min_spacing(F))) : Json(nullptr);
        Json rows = Json::array();
        table.header = {"N", "M", "comparator", "ratio"};
        for (u64 N : detail::default_N_grid(c, k)) {
            const u64 M = spacing_count_M(F, N);
            const double comp = k >= 2 ? close_points_comparator(k, P.num_vars(), c.Q, N) : std::nan("");
            Json row;
            row["N"] = N;
            row["M"] = M;
            row["comparator"] = number_or_null(comp);
            row["ratio"] = number_or_null(static_cast<double>(M) / comp);
            rows.push_back(row);
            table.rows.push_back({std::to_string(N), std::to_string(M), fmt(comp), fmt(static_cast<double>(M) / comp)});
        }
        result["rows"] = rows;
    } else if (c.command == "sieve-scan") {
        const MvPoly P = detail::single_poly(c);
        const unsigned k = P.total_degree();
        const auto filter = detail::make_filter(c.filter, c.Q, k);
        const u64 rstar = rep_max(P, c.Q, opts);
        result["polynomial"] = P.to_string();
        result["r_star"] = rstar;
        Json rows = Json::array();
        table.header = {"N", "empirical", "trivial_bound", "zhao_conjecture", "old_bound", "new_bound", "new_bound_applicable"};
        for (u64 N : detail::default_N_grid(c, k)) {
            const auto seq = SieveSequence::family(c.family, c.M, N, c.seed);
            auto d = delta_bounds(k, P.num_vars(), c.Q, N, rstar);
            d.empirical = empirical_delta(seq, P, c.Q, filter, opts);
            Json row;
            row["N"] = N;
            row["empirical"] = number_or_null(d.empirical);
            row["trivial_bound"] = number_or_null(d.trivial_bound);
            row["zhao_conjecture"] = number_or_null(d.zhao_conjecture);
            row["old_bound"] = number_or_null(d.old_bound);
            row["new_bound"] = number_or_null(d.new_bound);
            row["new_bound_applicable"] = d.new_bound_applicable;
            rows.push_back(row);
            table.rows.push_back({std::to_string(N), fmt(d.empirical), fmt(d.trivial_bound), fmt(d.zhao_conjecture),
                                  fmt(d.old_bound), fmt(d.new_bound), d.new_bound_applicable ? "1" : "0"});
        }
        result["rows"] = rows;
        result["label"] = "comparators, not certified bounds";
    } else if (c.command == "exponents") {
        const auto p = exponent_profile(c.k, c.ell);
        result["k"] = p.k;
        result["ell"] = p.ell;
        result["r"] = p.r;
        result["rho"] = to_string(p.rho);
        result["level_exponent"] = to_string(p.level_exponent);
        result["k_times_level"] = to_string(p.level_exponent * p.k);
        result["ellcond_rhs"] = to_string(p.ellcond_rhs);
        result["ell_condition"] = p.ell_condition();
        result["conjectural_level_exponent"] = to_string(p.conjectural_level_exponent);
        result["maynard_rhs"] = to_string(p.maynard_rhs);
        result["maynard_condition"] = p.maynard_condition();
        table.header = {"k", "ell", "r", "rho", "level_exponent", "k_times_level", "ellcond_rhs",
                        "conjectural_level_exponent", "maynard_rhs"};
        table.rows.push_back({std::to_string(p.k), std::to_string(p.ell), std::to_string(p.r), to_string(p.rho),
                              to_string(p.level_exponent), to_string(p.level_exponent * p.k), to_string(p.ellcond_rhs),
                              to_string(p.conjectural_level_exponent), to_string(p.maynard_rhs)});
    } else if (c.command == "check-setting") {
        const FactoredPoly F(detail::parse_factor_list(c.polys));
        const auto rep = check_setting(F);
        result["product"] = F.product().to_string();
        result["k"] = rep.k;
        result["ell"] = rep.ell;
        result["h"] = rep.h.str();
        result["level_exponent"] = to_string(rep.profile.level_exponent);
        result["disjoint"] = rep.disjoint;
        result["all_ell_conditions"] = rep.all_ell_conditions();
        result["all_divisors_monotone"] = rep.all_monotone();
        result["r_star_hypothesis"] = "asymptotic; not decided at finite Q";
        Json factors = Json::array();
        table.header = {"factor", "k", "ell", "r", "rho", "ellcond_rhs", "ell_condition", "h"};
        for (std::size_t j = 0; j < rep.factors.size(); ++j) {
            const auto& s = rep.factors[j];
            Json fj;
            fj["polynomial"] = F.factors()[j].poly.to_string();
            fj["variables"] = s.variables;
            fj["k"] = s.k;
            fj["ell"] = s.ell;
            fj["r"] = s.profile.r;
            fj["rho"] = to_string(s.profile.rho);
            fj["ellcond_rhs"] = to_string(s.profile.ellcond_rhs);
            fj["ell_condition"] = s.ell_condition;
            fj["h"] = s.h.str();
            factors.push_back(fj);
            table.rows.push_back({std::to_string(j + 1), std::to_string(s.k), std::to_string(s.ell),
                                  std::to_string(s.profile.r), to_string(s.profile.rho), to_string(s.profile.ellcond_rhs),
                                  s.ell_condition ? "1" : "0", s.h.str()});
        }
        result["factors"] = factors;
        Json divs = Json::array();
        for (const auto& d : rep.divisors) {
            Json dj;
            dj["factors"] = d.factor_indices;
            dj["k"] = d.k;
            dj["ell"] = d.ell;
            dj["level_exponent"] = to_string(d.level_exponent);
            dj["level_monotone"] = d.level_monotone;
            dj["ell_condition"] = d.ell_condition;
            divs.push_back(dj);
        }
        result["divisors"] = divs;
    } else if (c.command == "bv-sum") {
        const FactoredPoly F(detail::parse_factor_list(c.polys));
        std::optional<Rational> eps;
        if (!c.eps_bad.empty()) eps = parse_rational(c.eps_bad);
        const auto rep = bv_sum(F, c.Q, c.x, eps, c.A, opts);
        result["product"] = F.product().to_string();
        result["value"] = number_or_null(rep.value);
        result["comparator"] = number_or_null(rep.comparator);
        result["tuples"] = rep.tuples;
        result["excluded_bad"] = rep.excluded_bad;
        result["nonpositive"] = rep.nonpositive;
        result["nonzero_weight"] = rep.nonzero_weight;
        result["eps_bad"] = to_string(rep.eps_bad);
        table.header = {"value", "comparator", "tuples", "excluded_bad", "nonpositive", "nonzero_weight", "eps_bad"};
        table.rows.push_back({fmt(rep.value), fmt(rep.comparator), std::to_string(rep.tuples),
                              std::to_string(rep.excluded_bad), std::to_string(rep.nonpositive),
                              std::to_string(rep.nonzero_weight), to_string(rep.eps_bad)});
    } else if (c.command == "meanvalue-sum") {
        const MvPoly P = detail::single_poly(c);
        const auto rep = meanvalue_sum(P, c.Q, c.x, opts);
        result["polynomial"] = P.to_string();
        result["value"] = number_or_null(rep.value);
        result["tuples"] = rep.tuples;
        result["skipped_unit"] = rep.skipped_unit;
        result["negative_moduli"] = rep.negative_moduli;
        result["primitive_characters"] = rep.primitive_characters;
        table.header = {"value", "tuples", "skipped_unit", "negative_moduli", "primitive_characters"};
        table.rows.push_back({fmt(rep.value), std::to_string(rep.tuples), std::to_string(rep.skipped_unit),
                              std::to_string(rep.negative_moduli), std::to_string(rep.primitive_characters)});
    } else if (c.command == "norm-form") {
        const auto spec = detail::field_spec(c);
        const MvPoly N = norm_form(spec);
        const auto battery = irreducibility_battery(spec);
        result["f"] = spec.polynomial().to_string();
        result["n"] = spec.degree();
        result["truncation"] = spec.truncation();
        result["polynomial"] = N.to_string();
        result["terms"] = N.to_json();
        result["no_rational_root"] = battery.no_rational_root;
        result["squarefree"] = battery.squarefree;
        table.header = {"polynomial"};
        table.rows.push_back({N.to_string()});
    } else if (c.command == "prime-value-sieve") {
        const auto spec = detail::field_spec(c);
        const auto rep = prime_value_sieve(spec, c.Q, opts);
        result["norm_form"] = norm_form(spec).to_string();
        result["tuples"] = rep.tuples;
        result["prime_tuples"] = rep.prime_tuples;
        result["distinct_primes"] = rep.primes.size();
        result["max_multiplicity"] = rep.max_multiplicity;
        result["density_ratio"] = number_or_null(rep.density_ratio);
        result["maynard_condition"] = rep.maynard_condition;
        result["ell_condition"] = rep.ell_condition;
        Json primes = Json::array();
        table.header = {"prime", "multiplicity"};
        for (const auto& [p, qs] : rep.primes) {
            Json pj;
            pj["prime"] = p;
            pj["tuples"] = qs;
            primes.push_back(pj);
            table.rows.push_back({std::to_string(p), std::to_string(qs.size())});
        }
        result["primes"] = primes;
    } else if (c.command == "corollary-search") {
        const auto spec = detail::field_spec(c);
        const auto rep = corollary_search(spec, c.X, parse_rational(c.theta), opts);
        result["norm_form"] = norm_form(spec).to_string();
        result["theta"] = to_string(rep.theta);
        result["coordinate_bound"] = rep.coordinate_bound;
        result["coordinate_range"] = "1 <= q_i <= floor(X^(1/n)) (full range, not the dyadic box)";
        result["divisor_set_size"] = rep.divisor_set_size;
        result["primes_scanned"] = rep.primes_scanned;
        result["count"] = rep.count;
        result["density"] = number_or_null(rep.density);
        Json ws = Json::array();
        table.header = {"p", "d", "q"};
        for (const auto& w : rep.witnesses) {
            Json wj;
            wj["p"] = w.p;
            wj["d"] = w.d;
            wj["q"] = w.q;
            wj["all_d"] = w.all_d;
            ws.push_back(wj);
            std::string qs;
            for (std::size_t i = 0; i < w.q.size(); ++i) qs += (i ? " " : "") + std::to_string(w.q[i]);
            table.rows.push_back({std::to_string(w.p), std::to_string(w.d), qs});
        }
        result["witnesses"] = ws;
    } else if (c.command == "bad-moduli") {
        const MvPoly P = detail::single_poly(c);
        if (c.eps.empty()) throw InputError("--eps is required");
        const auto rep = bad_moduli_count(P, c.Q, parse_rational(c.eps), opts);
        result["polynomial"] = P.to_string();
        result["count"] = rep.count;
        result["total"] = rep.total;
        result["threshold"] = rep.threshold.str();
        result["ratio"] = number_or_null(rep.ratio);
        table.header = {"count", "total", "threshold", "ratio"};
        table.rows.push_back({std::to_string(rep.count), std::to_string(rep.total), rep.threshold.str(), fmt(rep.ratio)});
    } else {
        throw InputError("unknown command '" + c.command + "'");
    }
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

/// Two-column blocks: one block per curve (column 1 against each later column), blank-line separated.
inline void write_gnuplot(std::ostream& os, const std::string& command, const Table& t) {
    if (command != "sieve-scan" && command != "farey-stats")
        throw InputError("gnuplot output is available for sieve-scan and farey-stats only");
    const std::size_t curves = command == "sieve-scan" ? 6 : 4;
    for (std::size_t c = 1; c < curves; ++c) {
        if (c > 1) os << "\n\n";
        os << "# " << t.header[0] << " " << t.header[c] << "\n";
        for (const auto& row : t.rows) os << row[0] << " " << row[c] << "\n";
    }
}

inline void emit_error(std::ostream& err, const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = kind;
    j["message"] = message;
    err << j.dump() << "\n";
}

inline void register_options(CLI::App& app, ExperimentConfig& c) {
    app.require_subcommand(1);
    auto common = [&](CLI::App* s) {
        s->add_option("--seed", c.seed, "seed for randomized sequence families");
        s->add_option("--format", c.format, "json, csv or gnuplot")->check(CLI::IsMember({"json", "csv", "gnuplot"}));
        s->add_option("--workers", c.workers, "worker threads");
        s->add_option("--out", c.out, "write the report to this path");
    };
    auto poly = [&](CLI::App* s, bool many) {
        auto* o = s->add_option("--P", c.polys, many ? "factor polynomial (repeat per factor)" : "polynomial, e.g. x1^2+x2^2");
        o->required();
        if (!many) o->expected(1);
    };
    auto* cc = app.add_subcommand("congruence-count", "solutions of a*P(x) = y (mod m) in a box, with the Kerr comparator");
    poly(cc, false);
    cc->add_option("--a", c.a);
    cc->add_option("--m", c.m)->required();
    cc->add_option("--K", c.K, "box corner, comma separated")->delimiter(',');
    cc->add_option("--H", c.H)->required();
    cc->add_option("--L", c.L);
    cc->add_option("--R", c.R)->required();
    common(cc);

    auto* fs = app.add_subcommand("farey-stats", "Farey system counts, minimal spacing and M(N,Q)");
    poly(fs, false);
    fs->add_option("--Q", c.Q)->required();
    fs->add_option("--N", c.N_grid, "grid of N, comma separated")->delimiter(',');
    fs->add_option("--filter", c.filter, "none, star or at_least:<rational>");
    common(fs);

    auto* ss = app.add_subcommand("sieve-scan", "empirical Delta against the comparators over a grid of N");
    poly(ss, false);
    ss->add_option("--Q", c.Q)->required();
    ss->add_option("--N", c.N_grid)->delimiter(',');
    ss->add_option("--M", c.M, "sequence offset");
    ss->add_option("--family", c.family, "ones, spike, sign or unit");
    ss->add_option("--filter", c.filter);
    common(ss);

    auto* ex = app.add_subcommand("exponents", "exact exponent profile for degree k in ell variables");
    ex->add_option("--k", c.k)->required();
    ex->add_option("--ell", c.ell)->required();
    common(ex);

    auto* cs = app.add_subcommand("check-setting", "structural checks for a product of factors");
    poly(cs, true);
    common(cs);

    auto* bv = app.add_subcommand("bv-sum", "Bombieri-Vinogradov sum with polynomial moduli");
    poly(bv, true);
    bv->add_option("--Q", c.Q)->required();
    bv->add_option("--x", c.x)->required();
    bv->add_option("--A", c.A);
    bv->add_option("--eps-bad", c.eps_bad, "bad-moduli threshold (rational); default (log(Q+2))^{-k(A+m+1)}");
    common(bv);

    auto* mv = app.add_subcommand("meanvalue-sum", "primitive-character mean-value sum");
    poly(mv, false);
    mv->add_option("--Q", c.Q)->required();
    mv->add_option("--x", c.x)->required();
    common(mv);

    auto field = [&](CLI::App* s) {
        s->add_option("--f", c.f, "monic polynomial in t, e.g. t^3-2")->required();
        s->add_option("--k", c.k, "number of trailing coordinates dropped");
    };
    auto* nf = app.add_subcommand("norm-form", "expanded (incomplete) norm form");
    field(nf);
    common(nf);

    auto* pv = app.add_subcommand("prime-value-sieve", "prime values of the norm form on q ~ Q");
    field(pv);
    pv->add_option("--Q", c.Q)->required();
    common(pv);

    auto* co = app.add_subcommand("corollary-search", "primes p <= X with a large norm-form prime divisor of p-1");
    field(co);
    co->add_option("--X", c.X)->required();
    co->add_option("--theta", c.theta, "rational in (0,1)");
    common(co);

    auto* bm = app.add_subcommand("bad-moduli", "count q ~ Q with |P(q)| <= eps Q^k");
    poly(bm, false);
    bm->add_option("--Q", c.Q)->required();
    bm->add_option("--eps", c.eps)->required();
    common(bm);
}

/// Full CLI entry point. Returns the process exit status:
/// 0 success, 1 output failure, 2 validation error, 3 resource error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    ExperimentConfig c;
    CLI::App app{"polysieve: large sieve and Bombieri-Vinogradov experiments with polynomial moduli"};
    register_options(app, c);
    std::vector<const char*> argv{"polysieve"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        emit_error(err, "validation", e.what());
        return 2;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.format == "gnuplot" && c.command != "sieve-scan" && c.command != "farey-stats") {
        emit_error(err, "validation", "gnuplot output is available for sieve-scan and farey-stats only");
        return 2;
    }

    Json report;
    report["command"] = c.command;
    report["version"] = kVersion;
    report["config"] = config_json(c);
    Json result = Json::object();
    Table table;
    const auto start = std::chrono::steady_clock::now();
    try {
        dispatch(c, result, table);
    } catch (const InputError& e) {
        emit_error(err, "validation", e.what());
        return 2;
    } catch (const StructureError& e) {
        emit_error(err, "structure", e.what());
        return 2;
    } catch (const ResourceError& e) {
        emit_error(err, "resource", std::string(e.what()) + " (no partial output written)");
        return 3;
    }
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report["result"] = std::move(result);
    report["duration_ms"] = elapsed;

    std::ostringstream body;
    if (c.format == "json")
        body << report.dump(2) << "\n";
    else if (c.format == "csv") {
        body << "# " << c.command << " seed=" << c.seed << " version=" << kVersion << "\n";
        write_csv(body, table);
    } else {
        body << "# " << c.command << " seed=" << c.seed << " version=" << kVersion << "\n";
        write_gnuplot(body, c.command, table);
    }
    if (c.out.empty()) {
        out << body.str();
    } else {
        std::ofstream f(c.out);
        if (!f) {
            emit_error(err, "io", "cannot open " + c.out);
            return 1;
        }
        f << body.str();
    }
    return 0;
}

} // namespace polysieve::cli
