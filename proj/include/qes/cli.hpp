#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qes/dsl.hpp"

namespace qes::cli {

using json = nlohmann::ordered_json;

inline constexpr const char *schema_name = "qes-report";
inline constexpr const char *schema_version = "1.0.0";

enum Exit { exit_true = 0, exit_false = 1, exit_usage = 2 };

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string space, op, op1, op2, gens, in, deg = "0:1", k2 = "k2";
    int maxdeg = 3, max_order = 1, n = 1;
    bool auto_raise = false, spectrum = false;
    std::string format, out;
};

/// Report under construction. Status is the conjunction of the verdicts.
class Report {
public:
    Report(const std::string &command, json flags) {
        doc_ = {{"schema", schema_name},
                {"schema_version", schema_version},
                {"command", {{"name", command}, {"flags", std::move(flags)}}},
                {"status", "true"},
                {"exit_code", 0},
                {"verdicts", json::array()},
                {"witnesses", json::array()},
                {"normal_forms", json::object()},
                {"result", json::object()}};
    }

    void verdict(const std::string &name, bool holds) {
        doc_["verdicts"].push_back({{"name", name}, {"holds", holds}});
        if (!holds) {
            doc_["status"] = "false";
            doc_["exit_code"] = static_cast<int>(exit_false);
        }
    }
    void witness(const Witness &w, const std::string &context = "") {
        json j = {{"basis", w.basis}, {"output", w.output}, {"coefficient", w.coefficient.to_string()}};
        if (!context.empty()) j["context"] = context;
        doc_["witnesses"].push_back(std::move(j));
    }
    void normal_form(const std::string &name, const std::string &text) { doc_["normal_forms"][name] = text; }
    json &result() { return doc_["result"]; }

    void fail(const std::string &message, std::optional<std::size_t> position = std::nullopt) {
        doc_["status"] = "error";
        doc_["exit_code"] = static_cast<int>(exit_usage);
        doc_["error"] = {{"message", message}};
        if (position) doc_["error"]["position"] = *position;
    }

    json finish(std::chrono::steady_clock::duration elapsed) {
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count();
        doc_["timing"] = {{"elapsed_us", std::to_string(us)}};
        return doc_;
    }

private:
    json doc_;
};

namespace detail {

/// Splits at separators outside parentheses.
inline std::vector<std::string> split_top_level(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto &t : out) {
        auto b = t.find_first_not_of(" \t"), e = t.find_last_not_of(" \t");
        t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
    }
    return out;
}

inline json strings(const std::vector<ParamScalar> &v) {
    json out = json::array();
    for (const auto &x : v) out.push_back(x.to_string());
    return out;
}

inline json matrix_json(const Matrix<ParamScalar> &m) {
    json out = json::array();
    for (const auto &row : m) out.push_back(strings(row));
    return out;
}

inline std::string exponent_label(const QuasiExponent &e) { return "x^(" + e.to_string() + ")"; }

inline json basis_json(const dsl::Space &s) {
    json out = json::array();
    if (auto v = std::get_if<V1Space>(&s))
        for (const auto &e : v->basis()) out.push_back(exponent_label(e));
    else
        for (const auto &l : std::get<QuadSpace>(s).basis_labels()) out.push_back(l);
    return out;
}

inline const V1Space &need_v1(const dsl::Space &s, const std::string &command) {
    if (auto v = std::get_if<V1Space>(&s)) return *v;
    throw UsageError(command + " needs a V1 or P space");
}

inline void space_result(Report &r, const dsl::Space &s) {
    r.result()["space"] = dsl::to_string(s);
    r.result()["basis"] = basis_json(s);
}

inline json closure_json(const ClosureReport &c) {
    json table = json::array();
    for (const auto &t : c.table) {
        json e = {{"i", t.i}, {"j", t.j}, {"inside", t.inside}, {"coefficients", strings(t.coefficients)}};
        if (!t.inside) e["residual"] = t.residual;
        table.push_back(std::move(e));
    }
    json out = {{"generators", c.names},
                {"closed", c.closed},
                {"antisymmetric", c.antisymmetric},
                {"jacobi", c.jacobi},
                {"classification", c.classification},
                {"table", std::move(table)}};
    if (c.killing) {
        json k = {{"matrix", matrix_json(c.killing->matrix)}};
        k["signature"] = c.killing->signature ? json(*c.killing->signature) : json(nullptr);
        json samples = json::array();
        for (const auto &[a0, sig] : c.killing->samples) samples.push_back({{"a", a0.to_string()}, {"signature", sig}});
        k["samples"] = std::move(samples);
        out["killing"] = std::move(k);
    }
    return out;
}

// Subcommands.

inline void check(const Options &o, Report &r) {
    const dsl::Space s = dsl::parse_space(o.space);
    space_result(r, s);
    InvarianceReport inv;
    if (auto v = std::get_if<V1Space>(&s)) {
        DiffOp op = dsl::evaluate(o.op);
        r.normal_form("op", op.to_string());
        inv = check_invariance(op, *v);
    } else {
        const QuadSpace &q = std::get<QuadSpace>(s);
        MatOp m = dsl::evaluate(o.op, q);
        r.normal_form("op", m.to_string());
        inv = check_invariance_quad(m, q);
    }
    r.verdict("invariant", inv.verdict);
    for (const auto &w : inv.witnesses) r.witness(w);
}

inline void comm(const Options &o, Report &r) {
    if (o.space.empty()) {
        DiffOp a = dsl::evaluate(o.op1), b = dsl::evaluate(o.op2), c = commutator(a, b);
        r.normal_form("op1", a.to_string());
        r.normal_form("op2", b.to_string());
        r.normal_form("commutator", c.to_string());
        r.result()["zero"] = c.is_zero();
        return;
    }
    const dsl::Space s = dsl::parse_space(o.space);
    space_result(r, s);
    if (auto v = std::get_if<V1Space>(&s)) {
        DiffOp a = dsl::evaluate(o.op1), b = dsl::evaluate(o.op2), c = commutator(a, b);
        r.normal_form("op1", a.to_string());
        r.normal_form("op2", b.to_string());
        r.normal_form("commutator", c.to_string());
        r.result()["zero"] = c.is_zero();
        json action = json::array();
        bool zero_on_space = true;
        for (const auto &e : v->basis()) {
            const QuasiPoly img = act_on(c, *v, e);
            zero_on_space = zero_on_space && img.is_zero();
            action.push_back({{"basis", exponent_label(e)}, {"image", img.to_string()}});
        }
        r.result()["zero_on_space"] = zero_on_space;
        r.result()["action"] = std::move(action);
    } else {
        const QuadSpace &q = std::get<QuadSpace>(s);
        MatOp a = dsl::evaluate(o.op1, q), b = dsl::evaluate(o.op2, q), c = commutator(a, b);
        r.normal_form("op1", a.to_string());
        r.normal_form("op2", b.to_string());
        r.normal_form("commutator", c.to_string());
        r.result()["zero"] = c.is_zero();
    }
}

inline void closure(const Options &o, Report &r) {
    const dsl::Space s = dsl::parse_space(o.space);
    space_result(r, s);
    const auto names = split_top_level(o.gens, ',');
    ClosureReport c;
    if (auto v = std::get_if<V1Space>(&s)) {
        std::vector<DiffOp> gens;
        std::optional<std::size_t> identity;
        for (const auto &n : names) {
            gens.push_back(dsl::evaluate(n));
            r.normal_form(n, gens.back().to_string());
            if (gens.back() == DiffOp::identity()) identity = gens.size() - 1;
        }
        c = closure_on_space(gens, names, *v, identity);
    } else {
        const QuadSpace &q = std::get<QuadSpace>(s);
        std::vector<MatOp> gens;
        for (const auto &n : names) {
            gens.push_back(dsl::evaluate(n, q));
            r.normal_form(n, gens.back().to_string());
        }
        c = closure_check(gens, names, q);
    }
    r.verdict("closed", c.closed);
    r.verdict("antisymmetric", c.antisymmetric);
    r.verdict("jacobi", c.jacobi);
    r.result()["closure"] = closure_json(c);
}

inline void fit(const Options &o, Report &r) {
    const dsl::Space s = dsl::parse_space(o.space);
    const V1Space &v = need_v1(s, "fit");
    space_result(r, s);
    DiffOp A = dsl::evaluate(o.op), J0 = dsl::evaluate(o.in);
    r.normal_form("op", A.to_string());
    r.normal_form("in", J0.to_string());
    PolyFit f = fit_poly_in_J0(A, J0, v, o.maxdeg, o.auto_raise);
    r.verdict("fit", f.ok);
    if (f.witness) r.witness(*f.witness);
    r.result()["degree"] = f.max_deg;
    r.result()["coefficients"] = strings(f.coefficients);
    r.result()["canonical"] = f.canonical;
    r.result()["warnings"] = f.warnings;
}

inline std::pair<int, int> window(const std::string &deg) {
    auto colon = deg.find(':');
    if (colon == std::string::npos) throw UsageError("--deg expects LO:HI");
    try {
        return {std::stoi(deg.substr(0, colon)), std::stoi(deg.substr(colon + 1))};
    } catch (const std::exception &) {
        throw UsageError("--deg expects integers LO:HI");
    }
}

inline void search(const Options &o, Report &r) {
    const dsl::Space s = dsl::parse_space(o.space);
    space_result(r, s);
    const auto [lo, hi] = window(o.deg);
    json basis = json::array();
    if (auto v = std::get_if<V1Space>(&s)) {
        SearchResult res = search_preserving(*v, o.max_order, lo, hi);
        bool all = true;
        for (const auto &op : res.basis) {
            basis.push_back(op.to_string());
            all = all && check_invariance(op, *v).verdict;
        }
        json rechecks = json::array();
        for (const auto &[a0, dim] : res.rechecks) rechecks.push_back({{"a", a0.to_string()}, {"dimension", dim}});
        r.verdict("all_invariant", all);
        r.verdict("rechecks_agree", res.rechecks_agree);
        r.result()["rechecks"] = std::move(rechecks);
    } else {
        if (o.max_order != 1) throw UsageError("quadratic-extension search is first order only");
        const QuadSpace &q = std::get<QuadSpace>(s);
        bool all = true;
        for (const auto &g : preserving_first_order(q, hi)) {
            basis.push_back(g.to_string());
            all = all && check_invariance_quad(g.mat, q).verdict;
        }
        r.verdict("all_invariant", all);
    }
    r.result()["dimension"] = basis.size();
    r.result()["operators"] = std::move(basis);
}

inline void lame(const Options &o, Report &r) {
    const ParamScalar k2 = dsl::evaluate_scalar(dsl::parse(o.k2));
    const QuadSpace s = lame_space(o.n, k2);
    space_result(r, dsl::Space(s));
    const MatOp H = lame_pullback(o.n, k2);
    r.normal_form("H", H.to_string());
    InvarianceReport inv = check_invariance_quad(H, s);
    r.verdict("invariant", inv.verdict);
    for (const auto &w : inv.witnesses) r.witness(w);
    r.result()["N"] = lame_N(o.n).to_string();
    if (!o.spectrum || !inv.verdict) return;
    Spectrum sp = algebraic_spectrum(H, s);
    r.result()["matrix"] = matrix_json(sp.matrix);
    r.result()["charpoly"] = sp.charpoly.to_string("E");
    r.result()["charpoly_coefficients"] = strings(sp.charpoly.coefficients());
    if (k2.is_constant()) {
        RootCount rc = real_roots_at(sp.charpoly, k2.constant_value());
        r.result()["degree"] = rc.degree;
        r.result()["real_distinct_roots"] = rc.real_distinct;
        r.verdict("real_distinct", rc.real_distinct == rc.degree);
        r.verdict("squarefree", rc.squarefree);
    }
}

inline std::string param_arg(const V1Space &s) { return s.a_value() ? s.a_value()->to_string() : "a"; }

inline void catalog(const Options &o, Report &r) {
    const dsl::Space s = dsl::parse_space(o.space);
    space_result(r, s);
    std::vector<std::string> exprs;
    json entries = json::array();
    if (auto v = std::get_if<V1Space>(&s)) {
        const std::string n = std::to_string(v->n());
        if (!v->m()) {
            for (const char *g : {"jp", "j0", "jm"}) exprs.push_back(std::string(g) + "(" + n + ")");
        } else {
            const std::string m = std::to_string(*v->m()), a = param_arg(*v);
            const std::string nma = n + "," + m + "," + a;
            for (const char *g : {"Jp", "J0", "Jm", "K", "Kp"}) exprs.push_back(std::string(g) + "(" + nma + ")");
            for (const char *g : {"jp", "j0", "jm"}) exprs.push_back(std::string(g) + "(" + n + ")");
            for (const char *g : {"kp", "k0", "km"}) exprs.push_back(std::string(g) + "(" + m + "," + a + ")");
            if (v->generic())
                for (int al = 0; al <= v->delta(); ++al)
                    for (const char *g : {"Q", "Qbar"}) exprs.push_back(std::string(g) + "(" + n + "," + m + "," + std::to_string(al) + ")");
            if (v->specialized() && v->a_value()->is_integer()) {
                const long k = v->a_value()->to_long();
                if (k > 0 && v->n() <= k && *v->m() - k >= v->n())
                    for (const char *g : {"Wp", "Wm"}) exprs.push_back(std::string(g) + "(" + n + "," + m + "," + std::to_string(k) + ")");
            }
        }
        for (const auto &e : exprs) {
            DiffOp op = dsl::evaluate(e);
            entries.push_back({{"name", e}, {"normal_form", op.to_string()}, {"invariant", check_invariance(op, *v).verdict}});
        }
    } else {
        const QuadSpace &q = std::get<QuadSpace>(s);
        const std::string label = q.to_string();
        const std::string args = label.substr(label.find('(') + 1, label.size() - label.find('(') - 2);
        if (label.rfind("SqrtP2", 0) == 0 || label.rfind("RatioSqrt", 0) == 0) exprs = {"S1(" + args + ")", "S2(" + args + ")"};
        exprs.push_back("S3()");
        if (label.rfind("Lame", 0) == 0) exprs.push_back("LameH(" + args + ")");
        for (const auto &e : exprs) {
            MatOp m = dsl::evaluate(e, q);
            entries.push_back({{"name", e}, {"normal_form", m.to_string()}, {"invariant", check_invariance_quad(m, q).verdict}});
        }
        json family = json::array();
        for (const auto &g : preserving_first_order(q)) family.push_back(g.to_string());
        r.result()["first_order_family"] = std::move(family);
    }
    r.result()["generators"] = std::move(entries);
}

// Text rendering.

inline std::string scalar_text(const json &j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "none";
    return j.dump();
}

inline void text_value(std::ostream &os, const json &j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) {
            if (v.is_structured() && !v.empty()) {
                os << pad << k << ":\n";
                text_value(os, v, indent + 2);
            } else {
                os << pad << k << ": " << (v.is_structured() ? std::string("[]") : scalar_text(v)) << "\n";
            }
        }
    } else if (j.is_array()) {
        bool flat = std::none_of(j.begin(), j.end(), [](const json &x) { return x.is_object(); });
        if (flat) {
            for (const auto &v : j) os << pad << (v.is_array() ? v.dump() : scalar_text(v)) << "\n";
        } else {
            for (const auto &v : j) {
                os << pad << "-\n";
                text_value(os, v, indent + 2);
            }
        }
    } else {
        os << pad << scalar_text(j) << "\n";
    }
}

inline void render_text(std::ostream &os, const json &doc) {
    os << "qes " << doc["command"]["name"].get<std::string>();
    for (const auto &[k, v] : doc["command"]["flags"].items()) os << " --" << k << " " << scalar_text(v);
    os << "\nstatus: " << doc["status"].get<std::string>() << "\n";
    if (doc.contains("error")) {
        os << "error: " << doc["error"]["message"].get<std::string>() << "\n";
        return;
    }
    for (const auto &v : doc["verdicts"]) os << "verdict " << v["name"].get<std::string>() << ": " << (v["holds"].get<bool>() ? "true" : "false") << "\n";
    for (const auto &[k, v] : doc["normal_forms"].items()) os << k << " = " << v.get<std::string>() << "\n";
    for (const auto &w : doc["witnesses"])
        os << "witness: basis " << w["basis"].get<std::string>() << ", output " << w["output"].get<std::string>()
           << ", coefficient " << w["coefficient"].get<std::string>() << "\n";
    if (!doc["result"].empty()) {
        os << "result:\n";
        text_value(os, doc["result"], 2);
    }
}

} // namespace detail

/// Runs one invocation (arguments without the program name) and returns the
/// exit code. QES_FORMAT supplies the default output format.
inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    const auto start = std::chrono::steady_clock::now();
    Options o;
    if (const char *f = std::getenv("QES_FORMAT")) o.format = f;
    if (o.format.empty()) o.format = "json";

    CLI::App app{"Invariant-space checks for differential operators"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", o.out, "write the report to FILE");

    json flags = json::object();
    auto opt = [&flags](CLI::App *sub, const std::string &name, auto &target, const std::string &help) {
        return sub->add_option("--" + name, target, help)->each([&flags, name](const std::string &v) { flags[name] = v; });
    };

    auto *c_check = app.add_subcommand("check", "does OP preserve SPACE");
    opt(c_check, "space", o.space, "space literal")->required();
    opt(c_check, "op", o.op, "operator expression")->required();

    auto *c_comm = app.add_subcommand("comm", "commutator of two operators");
    opt(c_comm, "op1", o.op1, "left operator")->required();
    opt(c_comm, "op2", o.op2, "right operator")->required();
    opt(c_comm, "space", o.space, "space literal");

    auto *c_closure = app.add_subcommand("closure", "commutator table of generators on a space");
    opt(c_closure, "space", o.space, "space literal")->required();
    opt(c_closure, "gens", o.gens, "comma-separated generators")->required();

    auto *c_fit = app.add_subcommand("fit", "fit OP as a polynomial in a diagonal generator");
    opt(c_fit, "space", o.space, "space literal")->required();
    opt(c_fit, "op", o.op, "operator expression")->required();
    opt(c_fit, "in", o.in, "diagonal generator")->required();
    opt(c_fit, "maxdeg", o.maxdeg, "polynomial degree")->check(CLI::NonNegativeNumber);
    c_fit->add_flag("--auto-raise", o.auto_raise, "raise the degree until the fit succeeds")
        ->each([&flags](const std::string &) { flags["auto-raise"] = "true"; });

    auto *c_search = app.add_subcommand("search", "all preserving operators in an ansatz window");
    opt(c_search, "space", o.space, "space literal")->required();
    opt(c_search, "max-order", o.max_order, "derivative order")->check(CLI::NonNegativeNumber);
    opt(c_search, "deg", o.deg, "degree window LO:HI");

    auto *c_lame = app.add_subcommand("lame", "Lame operator on its invariant space");
    opt(c_lame, "n", o.n, "space size")->required()->check(CLI::PositiveNumber);
    opt(c_lame, "k2", o.k2, "modulus squared");
    c_lame->add_flag("--spectrum", o.spectrum, "characteristic polynomial and root count")
        ->each([&flags](const std::string &) { flags["spectrum"] = "true"; });

    auto *c_catalog = app.add_subcommand("catalog", "named generators for a space");
    opt(c_catalog, "space", o.space, "space literal")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return exit_true;
    } catch (const CLI::ParseError &e) {
        err << "qes: " << e.what() << "\n";
        return exit_usage;
    }

    CLI::App *sub = app.get_subcommands().front();
    Report r(sub->get_name(), flags);
    try {
        const std::string name = sub->get_name();
        if (name == "check") detail::check(o, r);
        else if (name == "comm") detail::comm(o, r);
        else if (name == "closure") detail::closure(o, r);
        else if (name == "fit") detail::fit(o, r);
        else if (name == "search") detail::search(o, r);
        else if (name == "lame") detail::lame(o, r);
        else detail::catalog(o, r);
    } catch (const ParseError &e) {
        r.fail(e.what(), e.position());
    } catch (const dsl::EvalError &e) {
        r.fail(e.what(), e.position());
    } catch (const Error &e) {
        r.fail(e.what());
    }
    json doc = r.finish(std::chrono::steady_clock::now() - start);

    std::ostringstream text;
    if (o.format == "text") detail::render_text(text, doc);
    else text << doc.dump(2) << "\n";
    if (o.out.empty()) {
        out << text.str();
    } else {
        std::ofstream f(o.out);
        if (!f) {
            err << "qes: cannot write " << o.out << "\n";
            return exit_usage;
        }
        f << text.str();
    }
    if (doc["status"] == "error") err << "qes: " << doc["error"]["message"].get<std::string>() << "\n";
    return doc["exit_code"].get<int>();
}

} // namespace qes::cli
