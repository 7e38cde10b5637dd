#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "braidlab/braiding.hpp"
#include "braidlab/frt.hpp"
#include "braidlab/grouptype.hpp"
#include "braidlab/triangular.hpp"
#include "braidlab/uqsl2.hpp"

namespace braidlab {
namespace cli {

// exit codes: 0 = property holds / computation succeeded, 1 = refuted,
// 2 = indeterminate (truncated search or non-split spectrum or unsupported
// kernel class), 3 = input or usage error
enum ExitCode { EXIT_PASS = 0, EXIT_REFUTED = 1, EXIT_INDETERMINATE = 2, EXIT_INPUT = 3 };

inline nlohmann::json certificate_json(const TriangularityCertificate& cert) {
    nlohmann::json basis = nlohmann::json::array();
    int n = cert.dim();
    for (int r = 0; r < n; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < n; ++c)
            row.push_back(cert.basis[static_cast<size_t>(c)][static_cast<size_t>(r)].to_string());
        basis.push_back(row);
    }
    nlohmann::json leading = nlohmann::json::array();
    for (int x = 1; x <= n; ++x)
        for (int y = 1; y <= n; ++y)
            leading.push_back({{"x", x},
                               {"y", y},
                               {"value",
                                cert.leading[static_cast<size_t>(x - 1)][static_cast<size_t>(y - 1)]
                                    .to_string()}});
    nlohmann::json residuals = nlohmann::json::array();
    for (const auto& [xy, zs] : cert.residuals)
        for (const auto& [z, w] : zs) {
            nlohmann::json wv = nlohmann::json::array();
            for (const auto& c : w) wv.push_back(c.to_string());
            residuals.push_back({{"x", xy.first}, {"y", xy.second}, {"z", z}, {"vector", wv}});
        }
    return nlohmann::json{{"side", side_name(cert.side)},
                          {"basis_matrix", basis},
                          {"leading", leading},
                          {"residuals", residuals}};
}

inline nlohmann::json radical_json(const frt::Truncation& t, const frt::RadicalTruncation& rad) {
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& row : rad.basis) {
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& [idx, v] : row) {
            nlohmann::json word = nlohmann::json::array();
            if (idx > 0) {
                auto [d, pos] = t.degree_pos(idx);
                for (int g : frt::mono_digits(t.basis_monomial(d, pos), d, t.n())) {
                    auto [i, j] = frt::gen_legs(g, t.n());
                    word.push_back({{"i", i}, {"j", j}});
                }
            }
            coords.push_back({{"word", word}, {"c", v.to_string()}});
        }
        basis.push_back(coords);
    }
    return nlohmann::json{{"basis", basis},
                          {"filtered_dims", rad.filtered_dims},
                          {"quotient_graded_dims", rad.quotient_graded_dims}};
}

inline nlohmann::json reduced_report_json(int n, const frt::ReducedReport& rep) {
    auto genlist = [n](const std::vector<int>& gens) {
        nlohmann::json out = nlohmann::json::array();
        for (int g : gens) {
            auto [i, j] = frt::gen_legs(g, n);
            out.push_back({{"i", i}, {"j", j}});
        }
        return out;
    };
    nlohmann::json skews = nlohmann::json::array();
    for (const auto& sp : rep.skew_primitives) {
        auto [i, j] = frt::gen_legs(sp.generator, n);
        auto [gi, gj] = frt::gen_legs(sp.grouplike_g, n);
        auto [hi, hj] = frt::gen_legs(sp.grouplike_h, n);
        skews.push_back({{"x", {{"i", i}, {"j", j}}},
                         {"g", {{"i", gi}, {"j", gj}}},
                         {"h", {{"i", hi}, {"j", hj}}}});
    }
    return nlohmann::json{{"a_dims", rep.a_dims},
                          {"radical_filtered_dims", rep.radical_filtered},
                          {"quotient_graded_dims", rep.quotient_graded},
                          {"vanishing_generators", genlist(rep.vanishing_generators)},
                          {"grouplike_generators", genlist(rep.grouplike_generators)},
                          {"grouplike_image_count", rep.grouplike_images.size()},
                          {"skew_primitives", skews},
                          {"grouplike_commutators_vanish", rep.grouplike_commutators_vanish},
                          {"diagonal_action", rep.diagonal_action},
                          {"m_reduced", rep.m_reduced},
                          {"reconstruction_ok", rep.reconstruction_ok}};
}

namespace detail {

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    nlohmann::json doc;
    in >> doc;
    return doc;
}

inline void write_json_file(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write file: " + path);
    out << doc.dump(2) << "\n";
}

struct Emitter {
    std::string json_path;
    nlohmann::json report;

    void set(const std::string& key, nlohmann::json value) { report[key] = std::move(value); }
    void finish(const std::string& subcommand, int exit_code) {
        if (json_path.empty()) return;
        report["schema"] = "braidlab/1";
        report["subcommand"] = subcommand;
        report["exit_code"] = exit_code;
        write_json_file(json_path, report);
    }
};

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact analysis of finite-dimensional braidings"};
    app.require_subcommand(1);

    std::string input_path, out_path, emit_json, emit_braiding, side = "right",
                direction = "c-to-R";
    int degree = 2;
    long branch_limit = 1024, cap = 4096, uq_n = 1;

    auto* braidcheck = app.add_subcommand("braidcheck", "verify the braid equation");
    braidcheck->add_option("file", input_path)->required();
    braidcheck->add_option("--emit-json", emit_json);

    auto* rigid = app.add_subcommand("rigid", "decide rigidity via the c-flat map");
    rigid->add_option("file", input_path)->required();
    rigid->add_option("--emit-json", emit_json);

    auto* triangular = app.add_subcommand("triangular", "detect one-sided triangularity");
    triangular->add_option("file", input_path)->required();
    triangular->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
    triangular->add_option("--branch-limit", branch_limit);
    triangular->add_option("--emit-json", emit_json);

    auto* diagonal = app.add_subcommand("diagonal", "detect diagonal type");
    diagonal->add_option("file", input_path)->required();
    diagonal->add_option("--emit-json", emit_json);

    auto* frtcmd = app.add_subcommand("frt", "truncated FRT bialgebra and reduced quotient");
    frtcmd->add_option("file", input_path)->required();
    frtcmd->add_option("--degree", degree)->check(CLI::PositiveNumber);
    frtcmd->add_option("--cap", cap)->check(CLI::PositiveNumber);
    frtcmd->add_option("--emit-json", emit_json);

    auto* grouptypecmd = app.add_subcommand("grouptype", "group-type Yetter-Drinfeld analysis");
    grouptypecmd->add_option("file", input_path)->required();
    grouptypecmd->add_option("--degree", degree)->check(CLI::PositiveNumber);
    grouptypecmd->add_option("--emit-braiding", emit_braiding);
    grouptypecmd->add_option("--emit-json", emit_json);

    auto* uqcmd = app.add_subcommand("uq", "quantum-sl2 module braiding and report");
    uqcmd->add_option("--n", uq_n)->check(CLI::Range(0l, 4l));
    uqcmd->add_option("--degree", degree)->check(CLI::PositiveNumber);
    uqcmd->add_option("--emit-braiding", emit_braiding);
    uqcmd->add_option("--emit-json", emit_json);

    auto* convert = app.add_subcommand("convert", "Yang-Baxter operator conversion");
    convert->add_option("file", input_path)->required();
    convert->add_option("--direction", direction)->check(CLI::IsMember({"c-to-R", "R-to-c"}));
    convert->add_option("--out", out_path);
    convert->add_option("--emit-json", emit_json);

    std::vector<const char*> argv;
    argv.push_back("braidlab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return EXIT_INPUT;
    }

    detail::Emitter emitter;
    emitter.json_path = emit_json;
    try {
        if (braidcheck->parsed()) {
            auto b = load_braiding(detail::load_json_file(input_path));
            auto v = check_braid_equation(b);
            emitter.set("pass", v.pass);
            if (v.pass) {
                out << "braid equation: pass\n";
            } else {
                out << "braid equation: fail at output (" << v.out[0] << "," << v.out[1] << ","
                    << v.out[2] << ") input (" << v.in[0] << "," << v.in[1] << "," << v.in[2]
                    << ")\n";
                emitter.set("first_failure",
                            {{"out", {v.out[0], v.out[1], v.out[2]}},
                             {"in", {v.in[0], v.in[1], v.in[2]}}});
            }
            int code = v.pass ? EXIT_PASS : EXIT_REFUTED;
            emitter.finish("braidcheck", code);
            return code;
        }
        if (rigid->parsed()) {
            auto b = load_braiding(detail::load_json_file(input_path));
            bool r = check_rigidity(b);
            emitter.set("rigid", r);
            out << (r ? "rigid: yes\n" : "rigid: no\n");
            int code = r ? EXIT_PASS : EXIT_REFUTED;
            emitter.finish("rigid", code);
            return code;
        }
        if (triangular->parsed()) {
            auto b = load_braiding(detail::load_json_file(input_path));
            Side s = side == "left" ? Side::Left : Side::Right;
            auto res = detect_triangular(b, s, branch_limit);
            if (res.cert) {
                // pipeline soundness: the certificate must rebuild the table
                if (!certificate_matches(*res.cert, b))
                    throw input_error("internal: certificate failed re-verification");
                out << side << " triangular: yes\n";
                emitter.set("verdict", "holds");
                emitter.set("certificate", certificate_json(*res.cert));
                emitter.finish("triangular", EXIT_PASS);
                return EXIT_PASS;
            }
            std::string reason = tri_fail_name(res.fail);
            emitter.set("reason", reason);
            if (res.indeterminate) {
                out << side << " triangular: indeterminate (" << reason << ")\n";
                emitter.set("verdict", "indeterminate");
                emitter.finish("triangular", EXIT_INDETERMINATE);
                return EXIT_INDETERMINATE;
            }
            out << side << " triangular: refuted (" << reason << ")\n";
            emitter.set("verdict", "refuted");
            emitter.finish("triangular", EXIT_REFUTED);
            return EXIT_REFUTED;
        }
        if (diagonal->parsed()) {
            auto b = load_braiding(detail::load_json_file(input_path));
            auto res = detect_diagonal(b);
            if (res.ok) {
                out << "diagonal type: yes\n";
                nlohmann::json basis = nlohmann::json::array(), q = nlohmann::json::array();
                for (const auto& v : res.basis) {
                    nlohmann::json row = nlohmann::json::array();
                    for (const auto& c : v) row.push_back(c.to_string());
                    basis.push_back(row);
                }
                for (const auto& row : res.qtable) {
                    nlohmann::json r = nlohmann::json::array();
                    for (const auto& c : row) r.push_back(c.to_string());
                    q.push_back(r);
                }
                emitter.set("verdict", "holds");
                emitter.set("basis", basis);
                emitter.set("q_table", q);
                emitter.finish("diagonal", EXIT_PASS);
                return EXIT_PASS;
            }
            std::string reason = diag_fail_name(res.fail);
            emitter.set("reason", reason);
            emitter.set("verdict", res.indeterminate ? "indeterminate" : "refuted");
            out << "diagonal type: " << (res.indeterminate ? "indeterminate (" : "refuted (")
                << reason << ")\n";
            emitter.finish("diagonal", res.indeterminate ? EXIT_INDETERMINATE : EXIT_REFUTED);
            return res.indeterminate ? EXIT_INDETERMINATE : EXIT_REFUTED;
        }
        if (frtcmd->parsed()) {
            auto b = load_braiding(detail::load_json_file(input_path));
            frt::Truncation t(b, degree, cap);
            auto rad = frt::radical_of(t);
            // pipeline soundness: re-verify the coideal property
            auto delta = [&t](int i) -> const std::map<std::pair<int, int>, Scalar>& {
                return t.delta_global(i);
            };
            auto counit = [&t](int i) { return t.counit_global(i); };
            if (!frt::verify_coideal(t.total_dim(), delta, counit, rad.basis))
                throw input_error("internal: radical failed the coideal re-check");
            auto rep = frt::reduced_report_from(t, rad);
            out << "A dims:";
            for (int d : rep.a_dims) out << " " << d;
            out << "\nA^red graded dims:";
            for (int d : rep.quotient_graded) out << " " << d;
            out << "\nradical filtered dims:";
            for (int d : rep.radical_filtered) out << " " << d;
            out << "\ngrouplike images: " << rep.grouplike_images.size()
                << ", skew-primitives: " << rep.skew_primitives.size() << "\n";
            out << "diagonal action: " << (rep.diagonal_action ? "yes" : "no")
                << ", M-reduced: " << (rep.m_reduced ? "yes" : "no")
                << ", reconstruction: " << (rep.reconstruction_ok ? "ok" : "FAILED") << "\n";
            emitter.set("radical", radical_json(t, rad));
            emitter.set("report", reduced_report_json(b.dim, rep));
            emitter.finish("frt", EXIT_PASS);
            return EXIT_PASS;
        }
        if (grouptypecmd->parsed()) {
            auto d = grouptype::load_group_yd(detail::load_json_file(input_path));
            auto verdict = grouptype::validate_group_yd(d);
            if (!verdict.valid) {
                out << "invalid Yetter-Drinfeld data: " << verdict.violation << "\n";
                emitter.set("verdict", "refuted");
                emitter.set("violation", verdict.violation);
                emitter.finish("grouptype", EXIT_REFUTED);
                return EXIT_REFUTED;
            }
            auto b = grouptype::group_braiding(d);
            if (!emit_braiding.empty()) detail::write_json_file(emit_braiding, save_braiding(b));
            try {
                auto cc = grouptype::crosscheck_group_reduction(d, degree, cap);
                if (cc.abelian) {
                    out << "group braiding: valid; H/N invariant factors:";
                    for (const auto& f : cc.invariant_factors) out << " " << f;
                    out << " (free rank " << cc.free_rank << ")\n";
                } else {
                    out << "group braiding: valid; H/N is a nonabelian group of order "
                        << cc.quotient_order << "\n";
                }
                out << "braiding reconstruction: " << (cc.braiding_matches ? "ok" : "FAILED")
                    << ", k(H/N) M-reduced: " << (cc.quotient_m_reduced ? "yes" : "unchecked")
                    << ", degree-" << degree
                    << " relations match: " << (cc.relations_match ? "yes" : "NO") << "\n";
                nlohmann::json factors = nlohmann::json::array();
                for (const auto& f : cc.invariant_factors) factors.push_back(f.get_str());
                emitter.set("invariant_factors", factors);
                emitter.set("free_rank", cc.free_rank);
                emitter.set("braiding_matches", cc.braiding_matches);
                emitter.set("quotient_m_reduced", cc.quotient_m_reduced);
                emitter.set("relations_match", cc.relations_match);
                emitter.set("verdict", "holds");
                emitter.finish("grouptype", EXIT_PASS);
                return EXIT_PASS;
            } catch (const grouptype::unsupported_error& e) {
                out << "kernel computation unsupported: " << e.what() << "\n";
                emitter.set("verdict", "indeterminate");
                emitter.set("reason", e.what());
                emitter.finish("grouptype", EXIT_INDETERMINATE);
                return EXIT_INDETERMINATE;
            }
        }
        if (uqcmd->parsed()) {
            auto m = uq::build_simple_module(static_cast<int>(uq_n));
            auto b = uq::build_cf_braiding(m);
            if (!emit_braiding.empty()) detail::write_json_file(emit_braiding, save_braiding(b));
            auto rep = uq::uq_report(m, degree, cap);
            out << "L(" << uq_n << "): weights";
            for (long w : rep.weights_w) out << " " << w;
            out << "; P " << (rep.p_nonempty ? "nonempty" : "empty") << "\n";
            out << "predicted G~/N: free rank " << rep.predicted_free_rank << ", torsion";
            for (const auto& f : rep.predicted_invariant_factors) out << " " << f;
            out << "\ngrouplikes: " << rep.reduced.grouplike_images.size() << " (predicted "
                << rep.predicted_grouplikes << "), skew-primitives: "
                << rep.reduced.skew_primitives.size() << "\n";
            out << "right triangular: " << (rep.right_triangular ? "yes" : "NO")
                << ", diagonal action: " << (rep.reduced.diagonal_action ? "yes" : "NO")
                << ", relations match: " << (rep.relations_match ? "yes" : "NO") << "\n";
            nlohmann::json factors = nlohmann::json::array();
            for (const auto& f : rep.predicted_invariant_factors) factors.push_back(f.get_str());
            emitter.set("weights", rep.weights_w);
            emitter.set("p_nonempty", rep.p_nonempty);
            emitter.set("predicted_free_rank", rep.predicted_free_rank);
            emitter.set("predicted_invariant_factors", factors);
            emitter.set("report", reduced_report_json(m.dim(), rep.reduced));
            emitter.set("grouplike_count_matches", rep.grouplike_count_matches);
            emitter.set("upper_images_vanish", rep.upper_images_vanish);
            emitter.set("lower_diagonal_skew", rep.lower_diagonal_skew);
            emitter.set("relations_match", rep.relations_match);
            emitter.set("right_triangular", rep.right_triangular);
            emitter.set("weight_grading_ok", rep.weight_grading_ok);
            emitter.finish("uq", EXIT_PASS);
            return EXIT_PASS;
        }
        if (convert->parsed()) {
            auto doc = detail::load_json_file(input_path);
            // the operator table reuses the braiding file schema
            auto b = load_braiding(doc);
            auto res = ybe_convert(b.table, b.dim,
                                   direction == "c-to-R" ? YbeDirection::CtoR
                                                         : YbeDirection::RtoC,
                                   b.field);
            BraidedVectorSpace outop;
            outop.dim = b.dim;
            outop.field = b.field;
            outop.basis = b.basis;
            outop.table = res.op;
            if (!out_path.empty()) detail::write_json_file(out_path, save_braiding(outop));
            std::string target = direction == "c-to-R" ? "quantum Yang-Baxter equation"
                                                       : "braid equation";
            out << "converted; " << target << ": " << (res.target_holds ? "pass" : "fail")
                << "\n";
            emitter.set("target_equation", target);
            emitter.set("target_holds", res.target_holds);
            int code = res.target_holds ? EXIT_PASS : EXIT_REFUTED;
            emitter.finish("convert", code);
            return code;
        }
    } catch (const resource_error& e) {
        err << "resource limit: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const nlohmann::json::exception& e) {
        err << "malformed document: " << e.what() << "\n";
        return EXIT_INPUT;
    } catch (const math_error& e) {
        err << "arithmetic error: " << e.what() << "\n";
        return EXIT_INPUT;
    }
    err << "no subcommand\n";
    return EXIT_INPUT;
}

} // namespace cli
} // namespace braidlab
