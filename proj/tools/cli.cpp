#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktfunc/errors.hpp"
#include "ktfunc/instance_io.hpp"
#include "ktfunc/interp.hpp"
#include "ktfunc/kt.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/random.hpp"
#include "ktfunc/rectnorm.hpp"
#include "ktfunc/repro.hpp"
#include "ktfunc/splitting.hpp"
#include "ktfunc/verify.hpp"

namespace ktfunc::cli {

double parse_exponent(const std::string& text) {
    std::string s = text;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "inf" || s == "infinity") return kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v))
        throw SpecError("not a number or 'inf': '" + text + "'");
    return v;
}

namespace {

struct Globals {
    std::uint64_t seed = 0;
    bool guard_override = false;
    int digits = 12;

    EnumerationLimits limits() const {
        EnumerationLimits l;
        l.override_guard = guard_override;
        return l;
    }
};

/// key: value lines in insertion order.
class Report {
public:
    Report(std::ostream& os, int digits) : os_(os), digits_(digits) {}

    void text(const std::string& key, const std::string& value) { os_ << key << ": " << value << '\n'; }
    void num(const std::string& key, double v) { text(key, format_number(v, digits_)); }
    void nums(const std::string& key, const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += (s.empty() ? "" : " ") + format_number(x, digits_);
        text(key, s);
    }
    void indices(const std::string& key, const std::vector<std::size_t>& v) {
        std::string s;
        for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x + 1);
        text(key, s.empty() ? "-" : s);
    }
    void matrix(const std::string& key, const WeightedMatrix& a) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            auto r = a.row(i);
            nums(key + ".row" + std::to_string(i + 1), std::vector<double>(r.begin(), r.end()));
        }
    }
    void cells(const std::string& key, const std::vector<bool>& mask, std::size_t n) {
        std::string s;
        for (std::size_t k = 0; k < mask.size(); ++k)
            if (mask[k]) s += (s.empty() ? "" : " ") + ("(" + std::to_string(k / n + 1) + "," +
                                                       std::to_string(k % n + 1) + ")");
        text(key, s.empty() ? "-" : s);
    }

private:
    std::ostream& os_;
    int digits_;
};

struct Input {
    std::string path;    ///< "" or "-" reads the input stream
    std::string random;  ///< "MxN": seeded random instance instead of a file

    void attach(CLI::App* app) {
        app->add_option("input", path, "Instance file (JSON); stdin when omitted or '-'");
        app->add_option("--random", random, "Use a seeded random MxN instance instead of a file");
    }

    WeightedMatrix load(std::istream& in, const Globals& g, std::string& origin) const {
        if (!random.empty()) {
            const auto x = random.find_first_of("xX");
            std::size_t m = 0, n = 0;
            try {
                if (x == std::string::npos) throw std::invalid_argument("");
                m = std::stoul(random.substr(0, x));
                n = std::stoul(random.substr(x + 1));
            } catch (const std::exception&) {
                throw SpecError("--random expects MxN, got '" + random + "'");
            }
            if (m == 0 || n == 0) throw SpecError("--random sizes must be positive");
            std::mt19937_64 rng(g.seed);
            origin = "random " + std::to_string(m) + "x" + std::to_string(n);
            return random_matrix(rng, m, n);
        }
        if (path.empty() || path == "-") {
            origin = "stdin";
            return read_instance(in).to_matrix();
        }
        std::ifstream f(path);
        if (!f) throw ParseError(path, "cannot open file");
        origin = path;
        try {
            return read_instance(f).to_matrix();
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
        }
    }
};

struct Couple {
    std::string p = "inf";
    std::string q = "1";
    std::string t;

    void attach(CLI::App* app, bool need_t) {
        app->add_option("--p", p, "Outer exponent p (use 'inf' for infinity)")->capture_default_str();
        app->add_option("--q", q, "Inner exponent q")->capture_default_str();
        auto* opt = app->add_option("--t", t, "K_t parameter t > 0");
        if (need_t) opt->required();
    }
    CoupleSpec spec() const { return CoupleSpec(parse_exponent(p), parse_exponent(q), parse_exponent(t)); }
};

void header(Report& r, const std::string& command, const Globals& g) {
    r.text("command", command);
    r.text("seed", std::to_string(g.seed));
}

void echo_instance(Report& r, const WeightedMatrix& a, const std::string& origin) {
    r.text("instance", origin);
    r.text("shape", std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

void echo_spec(Report& r, const CoupleSpec& s) {
    r.num("p", s.p());
    r.num("q", s.q());
    r.num("t", s.t());
}

void echo_rect(Report& r, const std::string& key, const RectNormResult& res) {
    r.num(key + ".value", res.value);
    r.indices(key + ".rows", res.witness.rows);
    r.indices(key + ".cols", res.witness.cols);
    r.text(key + ".regime", to_string(res.regime));
}

// ---- norm -----------------------------------------------------------------

struct NormCmd {
    Input input;
    std::string which;
    std::string p = "2";
    std::string q = "1";

    void attach(CLI::App* app) {
        input.attach(app);
        app->add_option("--which", which, "lq | mixed | weak | lorentz | mixed-weak")
            ->required()
            ->check(CLI::IsMember({"lq", "mixed", "weak", "lorentz", "mixed-weak"}));
        app->add_option("--p", p, "Exponent p ('inf' allowed where meaningful)")->capture_default_str();
        app->add_option("--q", q, "Exponent q")->capture_default_str();
    }

    int run(std::istream& in, Report& r, const Globals& g) const {
        std::string origin;
        const WeightedMatrix a = input.load(in, g, origin);
        header(r, "norm", g);
        echo_instance(r, a, origin);
        r.text("which", which);
        const double pv = parse_exponent(p);
        const double qv = parse_exponent(q);

        // Scalar norms treat the matrix as a function on M x N with product masses.
        std::vector<double> prod;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                prod.push_back(a.row_space().mass(i) * a.col_space().mass(j));
        const MeasureSpace product(std::move(prod));
        std::span<const double> f(a.entries());

        if (which == "lq") {
            r.num("q", qv);
            r.num("value", lq_norm(f, product, qv));
        } else if (which == "weak") {
            r.num("p", pv);
            r.num("value", weak_lp_norm(f, product, pv));
        } else if (which == "lorentz") {
            r.num("p", pv);
            r.num("q", qv);
            r.num("value", lorentz_pq_norm(f, product, pv, qv));
        } else if (which == "mixed") {
            const auto rows = row_lq_norms(a, 1.0);
            const auto best = std::max_element(rows.begin(), rows.end()) - rows.begin();
            r.num("value", mixed_inf_one(a));
            r.num("value_transpose", mixed_inf_one_T(a));
            r.indices("witness_row", {static_cast<std::size_t>(best)});
        } else {
            r.num("p", pv);
            r.num("q", qv);
            r.num("value", mixed_weak_norm(a, pv, qv));
            r.num("value_transpose", mixed_weak_norm_T(a, pv, qv));
        }
        return kOk;
    }
};

// ---- rectnorm -------------------------------------------------------------

struct RectCmd {
    Input input;
    Couple couple;
    std::string kind = "both";

    void attach(CLI::App* app) {
        input.attach(app);
        couple.attach(app, true);
        app->add_option("--kind", kind, "triple | quad | both")
            ->check(CLI::IsMember({"triple", "quad", "both"}))
            ->capture_default_str();
    }

    int run(std::istream& in, Report& r, const Globals& g) const {
        std::string origin;
        const WeightedMatrix a = input.load(in, g, origin);
        const double pv = parse_exponent(couple.p);
        const double qv = parse_exponent(couple.q);
        const double tv = parse_exponent(couple.t);
        header(r, "rectnorm", g);
        echo_instance(r, a, origin);
        if (pv == 1.0 && qv == 1.0) {
            // p = 1: the rectangle norm degenerates to (1 ^ t) ||a||_1.
            if (!(tv > 0.0)) throw SpecError("t must be > 0");
            r.num("p", 1.0);
            r.num("q", 1.0);
            r.num("t", tv);
            echo_rect(r, "triple", rect_norm(a, 1.0, 0.0, tv, g.limits()));
            r.num("triple.closed_form", triple_norm_p1_degenerate(a, tv));
            return kOk;
        }
        const CoupleSpec spec(pv, qv, tv);
        echo_spec(r, spec);
        if (kind != "quad") echo_rect(r, "triple", triple_norm(a, spec, g.limits()));
        if (kind != "triple") echo_rect(r, "quad", quad_norm(a, spec, g.limits()));
        return kOk;
    }
};

// ---- split ----------------------------------------------------------------

struct SplitCmd {
    Input input;
    Couple couple;
    bool trace = false;

    void attach(CLI::App* app) {
        input.attach(app);
        couple.attach(app, true);
        app->add_flag("--trace", trace, "Print the per-stage selection");
    }

    int run(std::istream& in, Report& r, const Globals& g) const {
        std::string origin;
        const WeightedMatrix a = input.load(in, g, origin);
        const CoupleSpec spec = couple.spec();
        header(r, "split", g);
        echo_instance(r, a, origin);
        echo_spec(r, spec);
        const SplitResult s = split_p_q(a, spec, g.limits());
        r.cells("a_mask", s.a_mask, a.cols());
        r.cells("b_mask", s.b_mask(), a.cols());
        r.num("scale", s.scale);
        r.num("bound_a", s.bound_a);
        r.num("bound_b", s.bound_b);
        r.num("upper", s.upper());
        const double factor = s.scale > 0.0 ? s.upper() / (2.0 * s.scale) : 0.0;
        r.num("factor", factor);
        const bool ok = within_bound(s.bound_a, s.scale) && within_bound(s.bound_b, s.scale / s.t) &&
                        within_bound(s.upper(), 2.0 * s.scale);
        r.text("certified", ok ? "yes" : "no");
        if (trace) {
            for (std::size_t k = 0; k < s.trace.stages.size(); ++k) {
                const auto& st = s.trace.stages[k];
                const std::string key = "stage" + std::to_string(k + 1);
                r.indices(key + ".active_rows", st.active_rows);
                r.indices(key + ".column_order", st.column_order);
                r.nums(key + ".sigma", st.sigma);
                r.text(key + ".k", std::to_string(st.k));
                r.nums(key + ".row_sums", st.row_sums);
                r.indices(key + ".chosen_row", {st.chosen_row});
            }
        }
        return ok ? kOk : kVerificationFailed;
    }
};

// ---- kt -------------------------------------------------------------------

struct KtCmd {
    Input input;
    Couple couple;
    std::string oracle = "bracket";

    void attach(CLI::App* app) {
        input.attach(app);
        couple.attach(app, true);
        app->add_option("--oracle", oracle, "bracket | lp | mask")
            ->check(CLI::IsMember({"bracket", "lp", "mask"}))
            ->capture_default_str();
    }

    int run(std::istream& in, Report& r, const Globals& g) const {
        std::string origin;
        const WeightedMatrix a = input.load(in, g, origin);
        const CoupleSpec spec = couple.spec();
        header(r, "kt", g);
        echo_instance(r, a, origin);
        echo_spec(r, spec);
        r.text("oracle", oracle);
        if (oracle == "lp") {
            if (!(std::isinf(spec.p()) && spec.q() == 1.0))
                throw SpecError("the lp oracle needs the (inf, 1) couple");
            LpLimits lim;
            lim.override_guard = g.guard_override;
            const KtExact ex = kt_exact_lp(a, spec.t(), lim);
            r.num("value", ex.value);
            r.text("pivots", std::to_string(ex.pivots));
            r.matrix("b", ex.decomposition.b);
            r.matrix("c", ex.decomposition.c);
            return kOk;
        }
        if (oracle == "mask") {
            const KtMask mk = kt_mask_bruteforce(a, spec, 20, g.guard_override);
            r.num("value", mk.value);
            r.cells("a_mask", mk.a_mask, a.cols());
            return kOk;
        }
        const KtBracket br = kt_bracket(a, spec, g.limits());
        r.num("lower", br.lower);
        r.num("upper", br.upper);
        r.text("lower_source", to_string(br.lower_source));
        r.text("upper_source", to_string(br.upper_source));
        r.num("rect_norm", br.triple);
        r.num("c_pq", spec.c_pq());
        if (br.decomposition) {
            r.matrix("b", br.decomposition->b);
            r.matrix("c", br.decomposition->c);
        }
        return br.lower <= br.upper * (1.0 + kCertifyTolerance) ? kOk : kVerificationFailed;
    }
};

// ---- interp ---------------------------------------------------------------

struct InterpCmd {
    Input input;
    std::string mode = "bracket";
    double theta = 0.5;
    std::string p = "inf";
    std::string q = "1";
    std::string iq = "2";
    double ratio = 1.1;
    double decades = 4.0;
    std::string source = "bracket";

    void attach(CLI::App* app) {
        input.attach(app);
        app->add_option("--mode", mode, "bracket | theta-inf | weak-type | theta-q")
            ->check(CLI::IsMember({"bracket", "theta-inf", "weak-type", "theta-q"}))
            ->capture_default_str();
        app->add_option("--theta", theta, "Interpolation parameter in (0,1)")->capture_default_str();
        app->add_option("--p", p, "Couple outer exponent (theta-q)")->capture_default_str();
        app->add_option("--q", q, "Couple inner exponent (theta-q)")->capture_default_str();
        app->add_option("--iq", iq, "Interpolation exponent q ('inf' allowed) (theta-q)")
            ->capture_default_str();
        app->add_option("--ratio", ratio, "Grid ratio (theta-q)")->capture_default_str();
        app->add_option("--decades", decades, "Grid half-width in decades (theta-q)")->capture_default_str();
        app->add_option("--source", source, "bracket | lp (theta-q)")
            ->check(CLI::IsMember({"bracket", "lp"}))
            ->capture_default_str();
    }

    int run(std::istream& in, Report& r, const Globals& g) const {
        std::string origin;
        const WeightedMatrix a = input.load(in, g, origin);
        header(r, "interp", g);
        echo_instance(r, a, origin);
        r.text("mode", mode);
        r.num("theta", theta);
        const OperatorKernel u(a);
        if (mode == "bracket") {
            echo_rect(r, "bracket", bracket_u_p(u, theta, g.limits()));
        } else if (mode == "theta-inf") {
            const ThetaSup s = theta_inf_norm(u, theta, g.limits());
            r.num("value", s.value);
            r.num("t_star", s.t_star);
            r.text("candidates", std::to_string(s.candidates));
        } else if (mode == "weak-type") {
            const InterpSpec is(theta, 1.0);
            const WeakTypeResult w = weak_type_check(u, is.p(), g.limits());
            const double b = bracket_u_p(u, theta, g.limits()).value;
            const double ps = is.p() / (is.p() - 1.0);
            r.num("p", is.p());
            r.num("weak_type", w.value);
            r.indices("witness_cols", w.witness);
            r.num("bracket", b);
            r.num("p_star", ps);
            const bool ok = w.value <= b * (1.0 + 1e-9) && b <= ps * w.value * (1.0 + 1e-9);
            r.text("consistent", ok ? "yes" : "no");
            return ok ? kOk : kVerificationFailed;
        } else {
            const InterpSpec is(theta, parse_exponent(iq));
            ThetaQOptions opt;
            opt.ratio = ratio;
            opt.decades = decades;
            opt.source = source == "lp" ? KtSource::ExactLp : KtSource::Bracket;
            const Interval iv = theta_q_norm(a, is, parse_exponent(p), parse_exponent(q), opt, g.limits());
            r.num("iq", is.q());
            r.num("lower", iv.lo);
            r.num("upper", iv.hi);
            r.num("width", iv.width());
        }
        return kOk;
    }
};

// ---- verify ---------------------------------------------------------------

std::vector<std::pair<double, double>> parse_couples(const std::string& text) {
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw SpecError("couple '" + item + "' must be p:q");
        const double p = parse_exponent(item.substr(0, colon));
        const double q = parse_exponent(item.substr(colon + 1));
        CoupleSpec(p, q, 1.0);  // validates
        out.emplace_back(p, q);
    }
    return out;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_exponent(item));
    return out;
}

struct VerifyCmd {
    std::size_t trials = 200;
    std::size_t max_size = 5;
    std::string couples = "2:1,3:1,4:2,inf:2";
    std::string ts = "0.1,1,7";
    bool corrupt = false;

    void attach(CLI::App* app) {
        app->add_option("--trials", trials, "Number of random instances")->capture_default_str();
        app->add_option("--max-size", max_size, "Largest m and n")->capture_default_str()->check(
            CLI::Range(std::size_t{1}, std::size_t{8}));
        app->add_option("--couples", couples, "Comma-separated p:q pairs")->capture_default_str();
        app->add_option("--t-values", ts, "Comma-separated t values")->capture_default_str();
        app->add_flag("--corrupt-split-bound", corrupt, "Test hook: inflate split bounds")
            ->group("");
    }

    int run(std::istream&, Report& r, const Globals& g) const {
        VerifyOptions opt;
        opt.trials = trials;
        opt.max_size = max_size;
        opt.seed = g.seed;
        opt.couples = parse_couples(couples);
        opt.ts = parse_list(ts);
        opt.corrupt_split_bound = corrupt;
        header(r, "verify", g);
        r.text("trials", std::to_string(trials));
        r.text("max_size", std::to_string(max_size));
        const VerifySummary s = run_verify(opt);
        for (const auto& p : s.properties)
            r.text("property", p.name + " | passed " + std::to_string(p.passed) + " | failed " +
                                   std::to_string(p.failed));
        for (const auto& f : s.failures) r.text("failure", f);
        r.text("verdict", s.all_passed() ? "pass" : "fail");
        return s.all_passed() ? kOk : kVerificationFailed;
    }
};

// ---- repro ----------------------------------------------------------------

struct ReproCmd {
    std::string id;
    std::size_t n = 0, m = 4, trials = 100;
    std::string p = "2", q = "1", t = "";
    std::string sizes = "4,16,64,256";
    CLI::Option* n_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("case", id, "remark23 | remark24 | prop34 | varopoulos")
            ->required()
            ->check(CLI::IsMember({"remark23", "remark24", "prop34", "varopoulos"}));
        n_opt = app->add_option("--n", n, "Size (remark23 default 16, prop34 default 64)");
        app->add_option("--m", m, "Square size (varopoulos)")->capture_default_str();
        app->add_option("--trials", trials, "Instances (varopoulos)")->capture_default_str();
        app->add_option("--p", p, "Exponent p")->capture_default_str();
        app->add_option("--q", q, "Exponent q")->capture_default_str();
        app->add_option("--t", t, "Parameter t (prop34 default 0.25, varopoulos default 1)");
        app->add_option("--sizes", sizes, "Comma-separated sizes (remark24)")->capture_default_str();
    }

    int run(std::istream&, std::ostream& os, const Globals& g) const {
        const double pv = parse_exponent(p);
        const double qv = parse_exponent(q);
        auto size_or = [&](std::size_t d) { return n_opt->count() ? n : d; };
        ReproReport rep;
        if (id == "remark23") {
            rep = repro_single_row(size_or(16), pv);
        } else if (id == "remark24") {
            std::vector<std::size_t> ns;
            for (double v : parse_list(sizes)) {
                if (!(v >= 2.0) || v != std::floor(v)) throw SpecError("sizes must be integers >= 2");
                ns.push_back(static_cast<std::size_t>(v));
            }
            rep = repro_lorentz_row(ns, pv, qv);
        } else if (id == "prop34") {
            rep = repro_uniform_square(size_or(64), pv, qv, t.empty() ? 0.25 : parse_exponent(t));
        } else {
            rep = repro_unit_mass_factor(m, t.empty() ? 1.0 : parse_exponent(t), trials, g.seed);
        }
        if (!rep.seed) rep.seed = g.seed;
        os << "command: repro\n" << render(rep, g.digits);
        return rep.passed() ? kOk : kVerificationFailed;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"K_t-functionals and rectangle-norm bounds for mixed-norm couples"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "RNG seed (echoed in every report)")->capture_default_str();
    app.add_flag("--guard-override", g.guard_override, "Lift exhaustive-search size guards");
    app.add_option("--digits", g.digits, "Significant digits in reports")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));

    NormCmd norm;
    RectCmd rect;
    SplitCmd split;
    KtCmd kt;
    InterpCmd interp;
    VerifyCmd verify;
    ReproCmd repro;
    auto* s_norm = app.add_subcommand("norm", "Vector and mixed norms of an instance");
    auto* s_rect = app.add_subcommand("rectnorm", "Rectangle norms with witness");
    auto* s_split = app.add_subcommand("split", "Certified splitting A/B");
    auto* s_kt = app.add_subcommand("kt", "K_t bracket or exact oracle");
    auto* s_interp = app.add_subcommand("interp", "Operator brackets and interpolation norms");
    auto* s_verify = app.add_subcommand("verify", "Randomised property harness");
    auto* s_repro = app.add_subcommand("repro", "Worked-example reproductions");
    norm.attach(s_norm);
    rect.attach(s_rect);
    split.attach(s_split);
    kt.attach(s_kt);
    interp.attach(s_interp);
    verify.attach(s_verify);
    repro.attach(s_repro);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    Report r(out, g.digits);
    try {
        if (s_norm->parsed()) return norm.run(in, r, g);
        if (s_rect->parsed()) return rect.run(in, r, g);
        if (s_split->parsed()) return split.run(in, r, g);
        if (s_kt->parsed()) return kt.run(in, r, g);
        if (s_interp->parsed()) return interp.run(in, r, g);
        if (s_verify->parsed()) return verify.run(in, r, g);
        if (s_repro->parsed()) return repro.run(in, out, g);
    } catch (const CapacityError& e) {
        err << "size guard: " << e.what() << " (use --guard-override to lift)\n";
        return kSizeGuard;
    } catch (const CertificationError& e) {
        err << "certification failed: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace ktfunc::cli
