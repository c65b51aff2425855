#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nforge/io.hpp"

namespace nforge {

namespace detail_cli {

struct CommonOpts {
    std::string input;
    std::string ideal;
    std::string output;
    std::string format = "json";
    int max_degree = 0;  // 0 = take from the document / default
    std::vector<std::string> scalar_set;
    std::string cartan_type;
    std::int64_t l = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Json load_json(const std::string& path) {
    std::string bytes = read_file(path);
    try {
        return Json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput("input is not valid JSON: " + std::string(e.what()));
    }
}

inline void render_text(const Json& j, std::ostream& out, const std::string& prefix = "") {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            render_text(it.value(), out, prefix.empty() ? it.key() : prefix + "." + it.key());
    } else if (j.is_array()) {
        size_t i = 0;
        for (const auto& v : j) render_text(v, out, prefix + "[" + std::to_string(i++) + "]");
    } else {
        out << prefix << "\t" << j.dump() << "\n";
    }
}

inline void emit(const Json& report, const CommonOpts& opts, std::ostream& out) {
    std::ostream* target = &out;
    std::ofstream file;
    if (!opts.output.empty()) {
        file.open(opts.output, std::ios::binary);
        if (!file) throw InvalidInput("cannot open output file: " + opts.output);
        target = &file;
    }
    if (opts.format == "text")
        render_text(report, *target);
    else
        *target << report.dump(2) << "\n";
}

inline Json make_report(const std::string& command, const std::string& input_bytes,
                        const CommonOpts& opts) {
    Json j;
    j["command"] = command;
    j["input_hash"] = content_hash(input_bytes);
    Json o;
    if (!opts.input.empty()) o["input"] = opts.input;
    if (!opts.ideal.empty()) o["ideal"] = opts.ideal;
    if (opts.max_degree > 0) o["max_degree"] = opts.max_degree;
    if (!opts.scalar_set.empty()) o["scalar_set"] = opts.scalar_set;
    if (!opts.cartan_type.empty()) o["type"] = opts.cartan_type;
    if (opts.l > 0) o["l"] = opts.l;
    o["format"] = opts.format;
    j["options"] = o;
    return j;
}

inline std::vector<Cyc> parse_scalar_set(const std::vector<std::string>& lits,
                                         std::int64_t n) {
    std::vector<Cyc> out;
    for (const auto& s : lits) out.push_back(detail_io::parse_scalar(Json(s), n, "/scalar-set"));
    return out;
}

inline Json quasitriangular_json(const QuasitriangularReport& rep) {
    Json j;
    j["intertwines"] = rep.intertwines;
    if (rep.intertwine_witness) j["intertwine_witness"] = *rep.intertwine_witness;
    j["hexagon_left"] = rep.hexagon_left;
    j["hexagon_right"] = rep.hexagon_right;
    j["qybe"] = rep.qybe;
    j["all"] = rep.all();
    return j;
}

} // namespace detail_cli

// Batch front end. Returns the process exit code:
//   0 success, 1 validation failure, 2 resource-bound refusal,
//   3 internal inconsistency.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace detail_cli;
    CLI::App app{"nichols-forge: exact computation with generalized quantum doubles "
                 "of diagonal type"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("--input", opts.input, "input JSON document")->required();
        cmd->add_option("--output", opts.output, "write the report here instead of stdout");
        cmd->add_option("--max-degree", opts.max_degree, "override the truncation degree");
        cmd->add_option("--format", opts.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
    };

    std::string leaf;
    auto* nichols = app.add_subcommand("nichols", "Nichols algebra computations");
    nichols->require_subcommand(1);
    auto* cmd_dims = nichols->add_subcommand("dims", "graded dimensions of B(V)");
    add_common(cmd_dims, true);
    cmd_dims->callback([&] { leaf = "nichols dims"; });

    auto* dbl = app.add_subcommand("double", "the generalized quantum double");
    dbl->require_subcommand(1);
    auto* dbl_build = dbl->add_subcommand("build", "build the engine and report dimensions");
    add_common(dbl_build, true);
    dbl_build->callback([&] { leaf = "double build"; });
    auto* dbl_center = dbl->add_subcommand("center", "central grouplikes C and P");
    add_common(dbl_center, true);
    dbl_center->callback([&] { leaf = "double center"; });
    auto* dbl_thm42 = dbl->add_subcommand("thm42", "tensor decomposition checks");
    add_common(dbl_thm42, true);
    dbl_thm42->callback([&] { leaf = "double thm42"; });
    auto* dbl_cor43 = dbl->add_subcommand("cor43", "Frobenius-Lusztig kernel conditions");
    dbl_cor43->add_option("--type", opts.cartan_type, "Cartan type, e.g. A2")->required();
    dbl_cor43->add_option("--l", opts.l, "odd order of the root of unity")->required();
    add_common(dbl_cor43, false);
    dbl_cor43->callback([&] { leaf = "double cor43"; });

    auto* ideals = app.add_subcommand("ideals", "thin and skinny Hopf ideals");
    ideals->require_subcommand(1);
    auto* ideals_enum = ideals->add_subcommand("enumerate", "enumerate thin ideal data");
    add_common(ideals_enum, true);
    std::string family = "coordinate";
    ideals_enum->add_option("--family", family, "skinny or coordinate")
        ->check(CLI::IsMember({"skinny", "coordinate"}));
    ideals_enum->add_option("--scalar-set", opts.scalar_set,
                            "scalar literals for coordinate matchings");
    ideals_enum->callback([&] { leaf = "ideals enumerate"; });
    auto* ideals_quot = ideals->add_subcommand("quotient", "build A(T, Z, zeta)");
    add_common(ideals_quot, true);
    ideals_quot->add_option("--ideal", opts.ideal, "thin ideal JSON document")->required();
    ideals_quot->callback([&] { leaf = "ideals quotient"; });
    auto* ideals_dich = ideals->add_subcommand("dichotomy", "Theorem 6.1 certificate");
    add_common(ideals_dich, true);
    ideals_dich->callback([&] { leaf = "ideals dichotomy"; });

    auto* rmatrix = app.add_subcommand("rmatrix", "canonical R-matrix");
    rmatrix->require_subcommand(1);
    auto* rmatrix_verify = rmatrix->add_subcommand("verify", "construct and verify R");
    add_common(rmatrix_verify, true);
    rmatrix_verify->callback([&] { leaf = "rmatrix verify"; });

    auto* tri = app.add_subcommand("triangular", "minimal triangular structures");
    tri->require_subcommand(1);
    auto* tri_validate = tri->add_subcommand("validate", "validate and verify a Gelaki datum");
    add_common(tri_validate, true);
    tri_validate->callback([&] { leaf = "triangular validate"; });
    auto* tri_enum = tri->add_subcommand("enumerate", "enumerate (phi, M) structures");
    add_common(tri_enum, true);
    tri_enum->add_option("--scalar-set", opts.scalar_set, "scalar literals for M entries");
    tri_enum->callback([&] { leaf = "triangular enumerate"; });

    auto* fixtures = app.add_subcommand("fixtures", "constructed counterexamples");
    fixtures->require_subcommand(1);
    auto* fix55 = fixtures->add_subcommand("remark55", "the thin ideal outside the family");
    add_common(fix55, false);
    fix55->callback([&] { leaf = "fixtures remark55"; });

    try {
        std::vector<const char*> argv{"nichols-forge"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends print to out
            std::ostringstream help;
            int code = app.exit(e, help, help);
            out << help.str();
            return code;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::string input_bytes;
        if (!opts.input.empty()) input_bytes = read_file(opts.input);
        Json report = make_report(leaf, input_bytes, opts);
        auto load_double = [&]() {
            DoubleDatum d = parse_double_datum(Json::parse(input_bytes));
            if (opts.max_degree > 0) d.max_degree = opts.max_degree;
            return d;
        };

        if (leaf == "nichols dims") {
            DoubleDatum d = load_double();
            auto dims = nichols_dims(d, d.max_degree);
            Json r;
            r["dims"] = dims.dims;
            r["finite_within_cutoff"] = dims.finite;
            if (dims.finite)
                r["total"] = dims.total;
            else
                r["total"] = nullptr;
            report["result"] = r;
        } else if (leaf == "double build") {
            DoubleDatum d = load_double();
            DoubleEngine eng = build_engine(d);
            Json r;
            r["dimension"] = eng.dimension();
            r["truncated"] = eng.truncated();
            r["gamma_order"] = eng.gamma().order();
            r["v_dims"] = eng.v_nichols().dims_up_to(d.max_degree);
            r["w_dims"] = eng.w_nichols().dims_up_to(d.max_degree);
            r["warnings"] = eng.spec().warnings;
            report["result"] = r;
        } else if (leaf == "double center") {
            DoubleDatum d = load_double();
            CentralData cd = central_grouplikes(d);
            Json r;
            r["c_order"] = cd.c.order();
            r["c_elements"] = cd.c.elements;
            r["p_order"] = cd.p.order();
            r["orthogonal_cross_check"] = nondegenerate(d.tau0).nondegenerate;
            report["result"] = r;
        } else if (leaf == "double thm42") {
            DoubleDatum d = load_double();
            Thm42Report t = thm42_report(d);
            Json r;
            r["hypothesis_finite"] = t.hyp_finite;
            r["hypothesis_nondegenerate"] = t.hyp_nondegenerate;
            r["hypothesis_index_nontrivial"] = t.hyp_index_nontrivial;
            r["applicable"] = t.applicable;
            if (t.applicable) {
                r["c_order"] = t.c_order;
                r["p_order"] = t.p_order;
                r["fg_order"] = t.fg_order;
                r["sizes_ok"] = t.sizes_ok;
                r["a_split_mono"] = t.a_split;
                r["a1_monic"] = t.a1_monic;
                r["a1_epic"] = t.a1_epic;
                r["a2_monic"] = t.a2_monic;
                r["a2_epic"] = t.a2_epic;
                r["algebra_map_count"] = t.algebra_map_count;
                r["n_matches_c"] = t.n_matches_c;
            }
            report["result"] = r;
        } else if (leaf == "double cor43") {
            Cor43Report t = cor43_report(cartan_matrix(opts.cartan_type), opts.l);
            Json r;
            r["i_t_equals_c"] = t.t_equals_c;
            r["ii_c_cap_p_trivial"] = t.c_cap_p_trivial;
            r["iii_tau0_nondegenerate"] = t.tau0_nondegenerate;
            r["iv_l_prime_to_det"] = t.l_prime_to_det;
            r["cartan_det"] = t.cartan_det;
            r["all_agree"] = t.all_agree;
            report["result"] = r;
        } else if (leaf == "ideals enumerate") {
            DoubleDatum d = load_double();
            auto scalars = parse_scalar_set(opts.scalar_set, d.root_order());
            auto list = enumerate_thin(
                d, family == "skinny" ? ThinFamily::skinny_only : ThinFamily::coordinate_family,
                scalars);
            Json r;
            r["count"] = list.size();
            Json items = Json::array();
            for (const auto& datum : list) items.push_back(serialize_thin_ideal(datum));
            r["ideals"] = items;
            report["result"] = r;
        } else if (leaf == "ideals quotient") {
            DoubleDatum d = load_double();
            Json idoc = load_json(opts.ideal);
            ThinIdealDatum datum = parse_thin_ideal(idoc, d);
            IdealValidation val = validate_thin(d, datum);
            Json r;
            Json viol = Json::array();
            for (const auto& v : val.violations)
                viol.push_back(Json{{"code", v.code}, {"detail", v.detail}});
            r["violations"] = viol;
            r["warnings"] = val.warnings;
            if (!val.ok()) {
                report["result"] = r;
                emit(report, opts, out);
                return 1;
            }
            ThinQuotient q = quotient_build(d, datum);
            r["dimension"] = q.engine.dimension();
            r["gamma_orders"] = q.engine.gamma().orders;
            r["grading_dims"] = q.engine.grading_dims();
            // the ideal generators vanish in the quotient
            DoubleEngine dd = build_engine(d);
            bool vanish = true;
            for (const auto& t : datum.t.elements)
                if (!q.project_element(dd, DoubleEngine::sub(dd.grouplike(t), dd.one()))
                         .empty())
                    vanish = false;
            for (size_t k = 0; k < datum.z_columns.size() && vanish; ++k) {
                Element z, zeta;
                for (size_t i = 0; i < d.rank(); ++i) {
                    z = DoubleEngine::add(z, dd.scale(dd.v_gen(static_cast<int>(i)),
                                                      datum.z_columns[k][i]));
                    zeta = DoubleEngine::add(zeta, dd.scale(dd.w_gen(static_cast<int>(i)),
                                                            datum.zeta_columns[k][i]));
                }
                if (!q.project_element(dd, DoubleEngine::sub(z, zeta)).empty()) vanish = false;
            }
            r["generators_vanish"] = vanish;
            report["result"] = r;
            if (!vanish) throw InternalInconsistency("ideal generators survive the quotient");
        } else if (leaf == "ideals dichotomy") {
            DoubleDatum d = load_double();
            DichotomyReport t = dichotomy_report(d);
            Json r;
            r["branch"] = t.adjacency.rank_one ? "rank-one" : "connectivity";
            r["hypothesis_holds"] = t.applicable;
            if (t.adjacency.rank_one)
                r["rank_one_condition"] = t.adjacency.rank_one_condition;
            else {
                r["connected"] = t.adjacency.connected;
                Json edges = Json::array();
                for (auto& e : t.adjacency.edges)
                    edges.push_back(Json::array({e.first, e.second}));
                r["edges"] = edges;
            }
            r["skinny_count"] = t.skinny_count;
            r["non_skinny_count"] = t.non_skinny_count;
            r["certified"] = t.certified;
            report["result"] = r;
        } else if (leaf == "rmatrix verify") {
            DoubleDatum d = load_double();
            DoubleEngine eng = build_engine(d);
            RMatrix rm = canonical_rmatrix(eng);
            auto qt = verify_quasitriangular(eng, rm.r);
            auto tr = verify_triangular(eng, rm.r);
            Json r;
            r["dimension"] = eng.dimension();
            r["r_terms"] = rm.r.size();
            r["quasitriangular"] = quasitriangular_json(qt);
            r["triangular"] = tr.r21_r_is_identity;
            r["minimal"] = minimality_check(eng, rm.r);
            report["result"] = r;
            if (!qt.all())
                throw InternalInconsistency("canonical R-matrix failed an axiom");
        } else if (leaf == "triangular validate") {
            GelakiDatum g = parse_gelaki_datum(Json::parse(input_bytes));
            auto val = validate_gelaki(g);
            Json r;
            Json viol = Json::array();
            for (const auto& v : val.violations)
                viol.push_back(Json{{"code", v.code}, {"detail", v.detail}});
            r["violations"] = viol;
            r["valid"] = val.ok();
            if (!val.ok()) {
                report["result"] = r;
                emit(report, opts, out);
                return 1;
            }
            auto rep = gelaki_verify(g, opts.max_degree > 0 ? opts.max_degree : 6);
            r["quotient_dimension"] = rep.quotient_dim;
            r["double_quasitriangular"] = rep.double_quasitriangular;
            r["double_triangular"] = rep.double_triangular;
            r["quotient_quasitriangular"] = rep.quotient_quasitriangular;
            r["quotient_triangular"] = rep.quotient_triangular;
            r["lemma81"] = rep.lemma81;
            r["prop82"] = rep.prop82;
            r["quotient_minimal"] = rep.quotient_minimal;
            report["result"] = r;
        } else if (leaf == "triangular enumerate") {
            GelakiDatum g = parse_gelaki_datum(Json::parse(input_bytes));
            auto scalars = parse_scalar_set(opts.scalar_set, g.root_order());
            auto list = enumerate_structures(g, scalars,
                                             opts.max_degree > 0 ? opts.max_degree : 6);
            Json r;
            r["count"] = list.size();
            Json items = Json::array();
            for (const auto& st : list) {
                Json it;
                Json phi = Json::array();
                for (const auto& img : st.phi.images) phi.push_back(img);
                it["phi_images"] = phi;
                Json ms = Json::array();
                for (const auto& car : st.datum.carriers) {
                    Json m = Json::array();
                    for (const auto& row : car.m) {
                        Json rr = Json::array();
                        for (const auto& c : row) rr.push_back(c.str());
                        m.push_back(rr);
                    }
                    ms.push_back(Json{{"g", car.g}, {"M", m}});
                }
                it["matrices"] = ms;
                it["triangular"] = st.triangular;
                items.push_back(it);
            }
            r["structures"] = items;
            report["result"] = r;
        } else if (leaf == "fixtures remark55") {
            auto rep = remark55_fixture(opts.max_degree > 0 ? opts.max_degree : 4);
            Json r;
            r["datum"] = serialize_double_datum(rep.datum);
            r["cond_5_11"] = rep.cond_511;
            r["cond_5_12"] = rep.cond_512;
            r["projection_multiplicative"] = rep.projection_multiplicative;
            r["thin"] = rep.thin;
            r["v_image_in_group_algebra"] = rep.v_image_in_group_algebra;
            r["family_size"] = rep.family_size;
            r["reproduced_by_family"] = rep.reproduced_by_family;
            report["result"] = r;
        } else {
            err << "error: no command selected\n";
            return 1;
        }

        emit(report, opts, out);
        return 0;
    } catch (const InternalInconsistency& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const BoundExceeded& e) {
        err << "resource bound: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return 1;
    }
}

} // namespace nforge
