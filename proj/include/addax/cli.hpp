#pragma once

// Command-line front end. Parsing and rendering only: every answer is
// computed by a library call, so the commands stay thin.
//
// Exit codes: 0 success, 1 rejected input (a machine-readable report goes to
// stdout), 2 usage errors (message on stderr). Output is byte-deterministic:
// JSON objects carry sorted keys and --pretty switches to fixed plain text.

#include "addax/action.hpp"
#include "addax/classify.hpp"
#include "addax/io.hpp"
#include "addax/multilinear.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace addax {
namespace cli {

struct Options {
    std::string catalog;
    std::string input;
    std::string lambda;
    std::string params;
    std::string point;
    bool pretty = false;
    bool symbolic = false;
};

namespace detail {

inline Matrix parse_lambda(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw addax::detail::format_error(std::string("--lambda is not valid JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw addax::detail::format_error("--lambda must be an array of rows");
    size_t rows = j.size();
    size_t cols = j[0].size();
    Matrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw addax::detail::format_error("--lambda rows must have equal length");
        for (size_t c = 0; c < cols; ++c) {
            const Json& e = j[r][c];
            if (e.is_string())
                m.at(r, c) = parse_scalar(e.get<std::string>());
            else if (e.is_number_integer())
                m.at(r, c) = Scalar(static_cast<long>(e.get<long long>()));
            else
                throw addax::detail::format_error("--lambda entries must be scalar strings or integers");
        }
    }
    return m;
}

// Comma- or colon-separated scalars; surrounding blanks are ignored.
inline std::vector<Scalar> parse_scalar_list(const std::string& text, const std::string& what) {
    std::vector<Scalar> out;
    size_t start = 0;
    for (size_t pos = 0; pos <= text.size(); ++pos) {
        if (pos < text.size() && text[pos] != ',' && text[pos] != ':') continue;
        std::string piece = text.substr(start, pos - start);
        size_t a = piece.find_first_not_of(" \t");
        size_t b = piece.find_last_not_of(" \t");
        if (a == std::string::npos)
            throw addax::detail::format_error(what + " has an empty entry");
        try {
            out.push_back(parse_scalar(piece.substr(a, b - a + 1)));
        } catch (const ParseError& e) {
            throw addax::detail::format_error(what + ": " + e.what(), {out.size() + 1});
        }
        start = pos + 1;
    }
    return out;
}

inline CatalogEntry resolve_entry(const Options& opt) {
    std::optional<Matrix> lam;
    if (!opt.lambda.empty()) lam = parse_lambda(opt.lambda);
    if (!opt.catalog.empty()) return lookup_entry(opt.catalog, lam);
    return load_entry(opt.input);
}

inline Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(render_scalar(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void emit(const Options& opt, std::ostream& out, const Json& j, const std::string& pretty_text) {
    if (opt.pretty)
        out << pretty_text;
    else
        out << j.dump() << "\n";
}

inline int emit_failure(const Options& opt, std::ostream& out, const ValidationIssue& issue) {
    if (opt.pretty) {
        out << "invalid (" << issue.axiom;
        for (size_t w : issue.witness) out << " " << w;
        out << "): " << issue.detail << "\n";
    } else {
        Json j;
        j["valid"] = false;
        j["axiom"] = issue.axiom;
        j["witness"] = issue.witness;
        j["detail"] = issue.detail;
        out << j.dump() << "\n";
    }
    return 1;
}

inline int cmd_validate(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    Json j;
    j["valid"] = true;
    j["dim"] = entry.algebra.dim();
    if (!entry.algebra.name().empty()) j["name"] = entry.algebra.name();
    j["pair"] = entry.pair.has_value();
    std::string text = "ok: dim=" + std::to_string(entry.algebra.dim());
    if (entry.pair) {
        j["degree"] = entry.pair->degree();
        text += " pair=yes degree=" + std::to_string(entry.pair->degree());
    } else {
        text += " pair=no";
    }
    emit(opt, out, j, text + "\n");
    return 0;
}

inline int cmd_degree(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    size_t d = entry.require_pair().degree();
    Json j;
    j["degree"] = d;
    emit(opt, out, j, std::to_string(d) + "\n");
    return 0;
}

inline int cmd_form(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    SymForm f = invariant_form(entry.require_pair());
    Json entries = Json::object();
    std::string text;
    for (const auto& [idx, value] : f.entries()) {
        std::string key;
        for (size_t k = 0; k < idx.size(); ++k) {
            if (k) key += ",";
            key += std::to_string(idx[k]);
        }
        entries[key] = render_scalar(value);
        text += "F(" + key + ") = " + render_scalar(value) + "\n";
    }
    Json j;
    j["arity"] = f.arity();
    j["nvars"] = f.nvars();
    j["entries"] = std::move(entries);
    emit(opt, out, j, text);
    return 0;
}

inline int cmd_equation(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    HomPoly f = hypersurface_equation(entry.require_pair());
    Json j;
    j["degree"] = f.degree();
    j["nvars"] = f.nvars();
    j["equation"] = f.text();
    emit(opt, out, j, f.text() + "\n");
    return 0;
}

inline int cmd_act(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    const PointedPair& pair = entry.require_pair();
    if (opt.symbolic) {
        std::string formula = render_action(pair);
        Json j;
        j["action"] = formula;
        emit(opt, out, j, formula + "\n");
        return 0;
    }
    std::vector<Scalar> params = detail::parse_scalar_list(opt.params, "--params");
    Vec point = detail::parse_scalar_list(opt.point, "--point");
    Vec image = act(pair, params, point);
    Json coords = Json::array();
    for (const Scalar& c : image) coords.push_back(render_scalar(c));
    Json j;
    j["point"] = std::move(coords);
    emit(opt, out, j, render_point(image) + "\n");
    return 0;
}

inline int cmd_invariance(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    const PointedPair& pair = entry.require_pair();
    SymForm form = invariant_form(pair);
    if (auto witness = check_invariance(form, pair)) {
        Json j;
        j["invariant"] = false;
        j["w_index"] = witness->w_index;
        j["tuple"] = witness->tuple;
        j["value"] = render_scalar(witness->value);
        emit(opt, out, j, "not invariant: form sum breaks at W[" + std::to_string(witness->w_index) + "]\n");
        return 1;
    }
    HomPoly f = hypersurface_equation(pair);
    if (auto witness = invariance_obstruction(pair, f)) {
        Json j;
        j["invariant"] = false;
        j["w_index"] = witness->w_index;
        j["residual"] = render_polynomial(witness->residual);
        emit(opt, out, j,
             "not invariant: derivation residual at W[" + std::to_string(witness->w_index) + "]\n");
        return 1;
    }
    const unsigned trials = 8;
    if (!numeric_invariance_trials(pair, f, trials)) {
        Json j;
        j["invariant"] = false;
        j["detail"] = "numeric trial mismatch";
        emit(opt, out, j, "not invariant: numeric trial mismatch\n");
        return 1;
    }
    Json j;
    j["invariant"] = true;
    j["degree"] = f.degree();
    j["trials"] = trials;
    emit(opt, out, j,
         "invariant (degree " + std::to_string(f.degree()) + ", " + std::to_string(trials) + " trials)\n");
    return 0;
}

inline int cmd_classify(const Options& opt, std::ostream& out) {
    CatalogEntry entry = resolve_entry(opt);
    const PointedPair& pair = entry.require_pair();
    size_t d = pair.degree();
    if (d < 2) throw std::domain_error("classify: pair degree must be at least 2");
    Json j;
    j["degree"] = d;
    j["case"] = nullptr;
    j["rank"] = nullptr;
    j["lambda"] = nullptr;
    j["label"] = nullptr;
    j["certificate"] = nullptr;
    j["normalized"] = nullptr;
    if (d >= 3) {
        j["case"] = "DEGREE_GE_3";
    } else {
        BilinearTriple t = BilinearTriple::from_pair(pair);
        size_t nn = pair.dim();
        j["rank"] = t.rank();
        if (t.rank() == nn) {
            j["case"] = "NONDEGENERATE";
            j["label"] = "NONDEGENERATE n=" + std::to_string(nn - 2);
            if (auto canon = canonicalize_nondegenerate(t)) {
                j["certificate"] = Json{{"change", detail::matrix_json(canon->change.matrix)},
                                        {"scale", render_scalar(canon->scale)}};
                j["normalized"] = true;
            } else {
                j["normalized"] = false;
            }
        } else if (t.rank() + 1 == nn) {
            j["case"] = "CORANK_ONE";
            if (auto cls = classify_corank_one(t)) {
                j["lambda"] = detail::matrix_json(cls->lam);
                j["label"] = cls->label;
                j["normalized"] = cls->normalized;
                if (auto ext = extract_lambda(t))
                    j["certificate"] = Json{{"change", detail::matrix_json(ext->change.matrix)}};
            } else {
                j["normalized"] = false;
            }
        } else {
            j["case"] = "CORANK_GE_2";
        }
    }
    std::string text;
    for (const char* key : {"case", "degree", "rank", "label", "normalized", "lambda"}) {
        if (j[key].is_null()) continue;
        text += std::string(key) + " " +
                (j[key].is_string() ? j[key].get<std::string>() : j[key].dump()) + "\n";
    }
    detail::emit(opt, out, j, text);
    return 0;
}

inline int cmd_catalog_list(const Options& opt, std::ostream& out) {
    Json j;
    j["builtin"] = catalog_families();
    j["user"] = user_catalog_names();
    std::string text;
    for (const auto& name : catalog_families()) text += name + "\n";
    for (const auto& name : user_catalog_names()) text += name + " (user)\n";
    emit(opt, out, j, text);
    return 0;
}

inline int dispatch(const std::string& cmd, const Options& opt, std::ostream& out) {
    try {
        if (cmd == "validate") return cmd_validate(opt, out);
        if (cmd == "degree") return cmd_degree(opt, out);
        if (cmd == "form") return cmd_form(opt, out);
        if (cmd == "equation") return cmd_equation(opt, out);
        if (cmd == "act") return cmd_act(opt, out);
        if (cmd == "invariance") return cmd_invariance(opt, out);
        if (cmd == "classify") return cmd_classify(opt, out);
        if (cmd == "catalog-list") return cmd_catalog_list(opt, out);
        throw std::logic_error("dispatch: unknown command " + cmd);
    } catch (const ValidationError& e) {
        return emit_failure(opt, out, e.issue());
    } catch (const ParseError& e) {
        return emit_failure(opt, out, {"format", {}, e.what()});
    } catch (const Json::exception& e) {
        return emit_failure(opt, out, {"format", {}, e.what()});
    } catch (const std::domain_error& e) {
        return emit_failure(opt, out, {"input", {}, e.what()});
    } catch (const std::invalid_argument& e) {
        return emit_failure(opt, out, {"input", {}, e.what()});
    }
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact additive group actions on projective hypersurfaces"};
    app.require_subcommand(1);
    Options opt;

    auto add_entry_options = [&](CLI::App* sub) {
        sub->add_option("--catalog", opt.catalog, "built-in catalog entry, e.g. truncated:3");
        sub->add_option("--input", opt.input, "path to an algebra JSON file");
        sub->add_option("--lambda", opt.lambda, "symmetric matrix for corank_one, JSON rows");
        sub->add_flag("--pretty", opt.pretty, "plain text instead of JSON");
        return sub;
    };
    add_entry_options(app.add_subcommand("validate", "check the algebra and pair axioms"));
    add_entry_options(app.add_subcommand("degree", "degree of the pair"));
    add_entry_options(app.add_subcommand("form", "the distinguished multilinear form"));
    add_entry_options(app.add_subcommand("equation", "hypersurface equation"));
    CLI::App* act_cmd = add_entry_options(app.add_subcommand("act", "apply the additive action"));
    act_cmd->add_option("--params", opt.params, "parameter values, comma separated");
    act_cmd->add_option("--point", opt.point, "projective point, colon or comma separated");
    act_cmd->add_flag("--symbolic", opt.symbolic, "print the action formula instead");
    add_entry_options(app.add_subcommand("invariance", "recheck invariance of the equation"));
    add_entry_options(app.add_subcommand("classify", "canonical form of a degree-2 pair"));
    CLI::App* list_cmd = app.add_subcommand("catalog-list", "names of available catalog entries");
    list_cmd->add_flag("--pretty", opt.pretty, "plain text instead of JSON");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    std::string cmd = sub->get_name();
    if (cmd != "catalog-list") {
        if (opt.catalog.empty() == opt.input.empty()) {
            err << cmd << ": exactly one of --catalog or --input is required\n";
            return 2;
        }
        if (!opt.lambda.empty() && opt.catalog.empty()) {
            err << cmd << ": --lambda needs --catalog\n";
            return 2;
        }
    }
    if (cmd == "act") {
        if (opt.symbolic && (!opt.params.empty() || !opt.point.empty())) {
            err << "act: --symbolic takes neither --params nor --point\n";
            return 2;
        }
        if (!opt.symbolic && (opt.params.empty() || opt.point.empty())) {
            err << "act: --params and --point are required unless --symbolic\n";
            return 2;
        }
    }
    return detail::dispatch(cmd, opt, out);
}

} // namespace cli
} // namespace addax
