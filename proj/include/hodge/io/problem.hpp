#pragma once

// Problem files. One JSON document per problem:
//
//   { "version": "hodge/1", "kind": "<kind>", ...payload }
//
// Scalars are strings in the grammar of scalar_format.hpp, matrices are
// arrays of rows, vectors are arrays of scalars, filtrations are objects
// mapping a level to a list of spanning vectors, and series are arrays of
// [exponent-vector, coefficient] pairs. Payload keys by kind:
//
//   mhs                dim, F, W
//   weight-filtration  dim, N (one matrix), center
//   rel-weight         dim, N (one matrix), W
//   higgs-extract      dim, F, W, polarization?, nvars, order, gamma
//   orbit-reconstruct  dim, F, W, N (list), order, gamma1
//   amodel             potential, perturbation?
//   bmodel             potential, coordinates?  or  extension
//   verify             count?, order?

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <hodge/bmodel/bmodel.hpp>
#include <hodge/higgs/lie.hpp>
#include <hodge/io/scalar_format.hpp>

namespace hodge::io {

using json = nlohmann::ordered_json;

inline constexpr const char *format_version = "hodge/1";

inline const std::vector<std::string> &problem_kinds() {
    static const std::vector<std::string> kinds{"mhs",    "weight-filtration", "rel-weight", "higgs-extract",
                                                "orbit-reconstruct", "amodel", "bmodel", "verify"};
    return kinds;
}

struct problem {
    std::string kind;
    std::optional<std::size_t> dim;
    std::optional<decreasing_filtration> F;
    std::optional<increasing_filtration> W;
    std::vector<matrix> N;
    std::optional<int> center;
    std::optional<graded_polarization> polarization;
    std::optional<std::size_t> nvars;
    std::optional<int> order;
    std::optional<series_endo> gamma;
    std::optional<gw_potential> potential;
    std::optional<series_endo> perturbation;
    std::optional<std::vector<series_scalar>> coordinates;
    std::optional<extension_class> extension;
    std::optional<int> count;
};

// ---- reading -------------------------------------------------------------

namespace detail {

[[noreturn]] inline void bad(const std::string &path, const std::string &what) {
    throw validation_error(path + ": " + what);
}

inline const json &field(const json &j, const std::string &key, const std::string &path) {
    auto it = j.find(key);
    if (it == j.end()) bad(path, "missing field \"" + key + "\"");
    return *it;
}

inline long read_int(const json &j, const std::string &path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<long>();
}

inline std::size_t read_size(const json &j, const std::string &path) {
    long v = read_int(j, path);
    if (v < 0) bad(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline scalar read_scalar(const json &j, const std::string &path) {
    if (j.is_number_integer()) return scalar(j.get<long>());
    if (!j.is_string()) bad(path, "expected a scalar string");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const parse_error &e) {
        throw parse_error(e.position(), std::string(e.what()).substr(std::string(e.what()).find("expected ") + 9), path);
    }
}

inline rational read_rational(const json &j, const std::string &path) {
    scalar s = read_scalar(j, path);
    if (!s.is_rational()) bad(path, "expected a rational number");
    return s.constant_re();
}

inline matrix read_vector(const json &j, std::size_t dim, const std::string &path) {
    if (!j.is_array()) bad(path, "expected an array of scalars");
    if (j.size() != dim) bad(path, "expected " + std::to_string(dim) + " entries, found " + std::to_string(j.size()));
    matrix v(dim, 1);
    for (std::size_t i = 0; i < dim; ++i) v(i, 0) = read_scalar(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

inline matrix read_matrix(const json &j, std::size_t rows, std::size_t cols, const std::string &path) {
    if (!j.is_array()) bad(path, "expected an array of rows");
    if (j.size() != rows) bad(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        matrix row = read_vector(j[r], cols, path + "[" + std::to_string(r) + "]");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = row(c, 0);
    }
    return m;
}

inline int read_level(const std::string &key, const std::string &path) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(key, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != key.size() || key.empty()) bad(path, "level \"" + key + "\" is not an integer");
    return v;
}

inline std::map<int, subspace> read_levels(const json &j, std::size_t dim, const std::string &path) {
    if (!j.is_object()) bad(path, "expected an object mapping levels to spanning vectors");
    std::map<int, subspace> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string p = path + "." + it.key();
        int level = read_level(it.key(), p);
        if (!it.value().is_array()) bad(p, "expected a list of vectors");
        std::vector<matrix> cols;
        for (std::size_t k = 0; k < it.value().size(); ++k) {
            cols.push_back(read_vector(it.value()[k], dim, p + "[" + std::to_string(k) + "]"));
        }
        out.emplace(level, subspace::span(dim, cols));
    }
    return out;
}

inline exponent read_exponent(const json &j, std::size_t nvars, const std::string &path) {
    if (!j.is_array() || j.size() != nvars) bad(path, "expected an exponent vector of length " + std::to_string(nvars));
    exponent e(nvars);
    for (std::size_t v = 0; v < nvars; ++v) {
        long x = read_int(j[v], path + "[" + std::to_string(v) + "]");
        if (x < 0) bad(path, "exponent vectors must be non-negative");
        e[v] = static_cast<int>(x);
    }
    return e;
}

template <class Coef, class ReadCoef>
series<Coef> read_series(const json &j, std::size_t nvars, int order, Coef zero, ReadCoef read, const std::string &path) {
    if (!j.is_array()) bad(path, "expected a list of [exponent, coefficient] pairs");
    series<Coef> s(nvars, order, zero);
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string p = path + "[" + std::to_string(k) + "]";
        if (!j[k].is_array() || j[k].size() != 2) bad(p, "expected an [exponent, coefficient] pair");
        exponent e = read_exponent(j[k][0], nvars, p + "[0]");
        Coef c = read(j[k][1], p + "[1]");
        // Terms beyond the truncation order are dropped.
        if (total_degree(e) > order) continue;
        s.set(e, s.coeff(e) + c);
    }
    return s;
}

inline series_endo read_endo_series(const json &j, std::size_t nvars, int order, std::size_t dim, const std::string &path) {
    return read_series<matrix>(j, nvars, order, matrix(dim, dim),
                               [&](const json &c, const std::string &p) { return read_matrix(c, dim, dim, p); }, path);
}

inline series_scalar read_scalar_series(const json &j, std::size_t nvars, int order, const std::string &path) {
    return read_series<scalar>(j, nvars, order, scalar(), [](const json &c, const std::string &p) { return read_scalar(c, p); },
                               path);
}

inline int read_order(const json &j, const std::string &path, std::optional<int> override_order) {
    if (override_order) return *override_order;
    long v = read_int(j, path);
    if (v < 0 || v > 64) bad(path, "order must lie in [0, 64]");
    return static_cast<int>(v);
}

inline gw_potential read_potential(const json &j, const std::string &path, std::optional<int> override_order) {
    if (!j.is_object()) bad(path, "expected an object");
    gw_potential p;
    p.n = read_size(field(j, "n", path), path + ".n");
    if (p.n == 0 || p.n > 3) bad(path + ".n", "n must lie in [1, 3]");
    p.order = read_order(field(j, "order", path), path + ".order", override_order);
    const json &k = field(j, "kappa", path);
    p.kappa.assign(p.n, std::vector<std::vector<rational>>(p.n, std::vector<rational>(p.n)));
    if (!k.is_array() || k.size() != p.n) bad(path + ".kappa", "expected an n x n x n array");
    for (std::size_t a = 0; a < p.n; ++a) {
        const std::string pa = path + ".kappa[" + std::to_string(a) + "]";
        if (!k[a].is_array() || k[a].size() != p.n) bad(pa, "expected an n x n array");
        for (std::size_t b = 0; b < p.n; ++b) {
            const std::string pb = pa + "[" + std::to_string(b) + "]";
            if (!k[a][b].is_array() || k[a][b].size() != p.n) bad(pb, "expected n entries");
            for (std::size_t c = 0; c < p.n; ++c) {
                p.kappa[a][b][c] = read_rational(k[a][b][c], pb + "[" + std::to_string(c) + "]");
            }
        }
    }
    const json &inst = field(j, "instantons", path);
    if (!inst.is_array()) bad(path + ".instantons", "expected a list of [degree, N] pairs");
    for (std::size_t t = 0; t < inst.size(); ++t) {
        const std::string pt = path + ".instantons[" + std::to_string(t) + "]";
        if (!inst[t].is_array() || inst[t].size() != 2) bad(pt, "expected a [degree, N] pair");
        exponent e = read_exponent(inst[t][0], p.n, pt + "[0]");
        if (total_degree(e) > p.order) continue;
        if (p.instantons.count(e)) bad(pt, "repeated degree " + exponent_string(e));
        rational v = read_rational(inst[t][1], pt + "[1]");
        if (sgn(v) != 0) p.instantons.emplace(e, v);
    }
    validate_potential(p);
    return p;
}

inline std::size_t read_dim(const json &j) {
    std::size_t d = read_size(field(j, "dim", "$"), "$.dim");
    if (d == 0 || d > 16) bad("$.dim", "dimension must lie in [1, 16]");
    return d;
}

inline std::vector<matrix> read_matrix_list(const json &j, std::size_t dim, const std::string &path) {
    if (!j.is_array()) bad(path, "expected a list of matrices");
    std::vector<matrix> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(read_matrix(j[k], dim, dim, path + "[" + std::to_string(k) + "]"));
    return out;
}

inline extension_class read_extension(const json &j, const std::string &path, std::optional<int> override_order) {
    if (!j.is_object()) bad(path, "expected an object");
    extension_class e;
    e.n = read_size(field(j, "n", path), path + ".n");
    if (e.n == 0 || e.n > 3) bad(path + ".n", "n must lie in [1, 3]");
    e.order = read_order(field(j, "order", path), path + ".order", override_order);
    const json &g = field(j, "grades", path);
    if (!g.is_array()) bad(path + ".grades", "expected a list of grades");
    for (std::size_t k = 0; k < g.size(); ++k) e.grades.push_back(static_cast<int>(read_int(g[k], path + ".grades")));
    const std::size_t d = e.grades.size();
    if (d != 2 * e.n + 2) bad(path + ".grades", "expected 2n + 2 grades");
    e.N = read_matrix_list(field(j, "N", path), d, path + ".N");
    e.Q = read_matrix(field(j, "Q", path), d, d, path + ".Q");
    const json &f = field(j, "f", path);
    if (!f.is_array() || f.size() != e.n) bad(path + ".f", "expected n coordinate series");
    for (std::size_t k = 0; k < e.n; ++k) {
        e.f.push_back(read_scalar_series(f[k], e.n, e.order, path + ".f[" + std::to_string(k) + "]"));
    }
    e.logE = read_endo_series(field(j, "logE", path), e.n, e.order, d, path + ".logE");
    validate_extension(e);
    return e;
}

} // namespace detail

// Parses a problem document. `override_order` replaces every truncation
// order found in the file.
inline problem parse_problem(const std::string &text, std::optional<int> override_order = std::nullopt) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw parse_error(e.byte == 0 ? 0 : e.byte - 1, pos == std::string::npos ? "valid JSON" : "valid JSON (" + msg.substr(pos) + ")");
    }
    using namespace detail;
    if (!j.is_object()) bad("$", "expected a JSON object");
    const json &ver = field(j, "version", "$");
    if (!ver.is_string() || ver.get<std::string>() != format_version) {
        bad("$.version", std::string("expected \"") + format_version + "\"");
    }
    const json &kind = field(j, "kind", "$");
    if (!kind.is_string()) bad("$.kind", "expected a string");
    problem p;
    p.kind = kind.get<std::string>();
    const auto &kinds = problem_kinds();
    if (std::find(kinds.begin(), kinds.end(), p.kind) == kinds.end()) bad("$.kind", "unknown problem kind \"" + p.kind + "\"");

    if (p.kind == "mhs" || p.kind == "higgs-extract" || p.kind == "orbit-reconstruct") {
        p.dim = read_dim(j);
        p.F = decreasing_filtration(*p.dim, read_levels(field(j, "F", "$"), *p.dim, "$.F"));
        p.W = increasing_filtration(*p.dim, read_levels(field(j, "W", "$"), *p.dim, "$.W"));
    }
    if (p.kind == "weight-filtration" || p.kind == "rel-weight") {
        p.dim = read_dim(j);
        p.N.push_back(read_matrix(field(j, "N", "$"), *p.dim, *p.dim, "$.N"));
        if (p.kind == "weight-filtration") {
            p.center = j.contains("center") ? static_cast<int>(read_int(j["center"], "$.center")) : 0;
        } else {
            p.W = increasing_filtration(*p.dim, read_levels(field(j, "W", "$"), *p.dim, "$.W"));
        }
    }
    if (p.kind == "higgs-extract") {
        if (j.contains("polarization")) {
            const json &pol = j["polarization"];
            if (!pol.is_object()) bad("$.polarization", "expected an object mapping weights to forms");
            graded_polarization s;
            for (auto it = pol.begin(); it != pol.end(); ++it) {
                const std::string path = "$.polarization." + it.key();
                s.emplace(read_level(it.key(), path), read_matrix(it.value(), *p.dim, *p.dim, path));
            }
            p.polarization = s;
        }
        p.nvars = read_size(field(j, "nvars", "$"), "$.nvars");
        if (*p.nvars == 0 || *p.nvars > 4) bad("$.nvars", "nvars must lie in [1, 4]");
        p.order = read_order(field(j, "order", "$"), "$.order", override_order);
        p.gamma = read_endo_series(field(j, "gamma", "$"), *p.nvars, *p.order, *p.dim, "$.gamma");
    }
    if (p.kind == "orbit-reconstruct") {
        p.N = read_matrix_list(field(j, "N", "$"), *p.dim, "$.N");
        if (p.N.empty() || p.N.size() > 4) bad("$.N", "expected between 1 and 4 nilpotents");
        p.nvars = p.N.size();
        p.order = read_order(field(j, "order", "$"), "$.order", override_order);
        p.gamma = read_endo_series(field(j, "gamma1", "$"), *p.nvars, *p.order, *p.dim, "$.gamma1");
    }
    if (p.kind == "amodel" || (p.kind == "bmodel" && j.contains("potential"))) {
        p.potential = read_potential(field(j, "potential", "$"), "$.potential", override_order);
        const std::size_t d = 2 * p.potential->n + 2;
        if (p.kind == "amodel" && j.contains("perturbation")) {
            p.perturbation = read_endo_series(j["perturbation"], p.potential->n, p.potential->order, d, "$.perturbation");
        }
        if (p.kind == "bmodel" && j.contains("coordinates")) {
            const json &c = j["coordinates"];
            if (!c.is_array() || c.size() != p.potential->n) bad("$.coordinates", "expected n coordinate series");
            std::vector<series_scalar> f;
            for (std::size_t k = 0; k < c.size(); ++k) {
                f.push_back(read_scalar_series(c[k], p.potential->n, p.potential->order,
                                               "$.coordinates[" + std::to_string(k) + "]"));
            }
            p.coordinates = f;
        }
    }
    if (p.kind == "bmodel" && !p.potential) {
        if (!j.contains("extension")) bad("$", "bmodel problems need \"potential\" or \"extension\"");
        p.extension = read_extension(j["extension"], "$.extension", override_order);
    }
    if (p.kind == "verify") {
        p.count = j.contains("count") ? static_cast<int>(read_int(j["count"], "$.count")) : 10;
        if (*p.count < 1 || *p.count > 1000) bad("$.count", "count must lie in [1, 1000]");
        if (override_order) {
            p.order = override_order;
        } else if (j.contains("order")) {
            p.order = read_order(j["order"], "$.order", std::nullopt);
        }
    }
    return p;
}

// ---- writing -------------------------------------------------------------

inline json vector_json(const matrix &v) {
    json a = json::array();
    for (std::size_t i = 0; i < v.rows(); ++i) a.push_back(format_scalar(v(i, 0)));
    return a;
}

inline json matrix_json(const matrix &m) {
    json a = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_scalar(m(r, c)));
        a.push_back(row);
    }
    return a;
}

inline json subspace_json(const subspace &s) {
    json a = json::array();
    for (std::size_t c = 0; c < s.dim(); ++c) a.push_back(vector_json(s.basis().col(c)));
    return a;
}

template <class Filtration>
json filtration_json(const Filtration &f) {
    json o = json::object();
    for (const auto &[k, s] : f.levels()) o[std::to_string(k)] = subspace_json(s);
    return o;
}

inline json exponent_json(const exponent &e) {
    json a = json::array();
    for (int x : e) a.push_back(x);
    return a;
}

inline json series_json(const series_endo &s) {
    json a = json::array();
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (!s[k].is_zero()) a.push_back(json::array({exponent_json(s.monomial(k)), matrix_json(s[k])}));
    }
    return a;
}

inline json series_json(const series_scalar &s) {
    json a = json::array();
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (!s[k].is_zero()) a.push_back(json::array({exponent_json(s.monomial(k)), format_scalar(s[k])}));
    }
    return a;
}

inline json potential_json(const gw_potential &p) {
    json o = json::object();
    o["n"] = p.n;
    o["order"] = p.order;
    json k = json::array();
    for (std::size_t a = 0; a < p.n; ++a) {
        json ka = json::array();
        for (std::size_t b = 0; b < p.n; ++b) {
            json kb = json::array();
            for (std::size_t c = 0; c < p.n; ++c) kb.push_back(format_scalar(scalar(p.kappa[a][b][c])));
            ka.push_back(kb);
        }
        k.push_back(ka);
    }
    o["kappa"] = k;
    json inst = json::array();
    for (const auto &[b, v] : p.instantons) inst.push_back(json::array({exponent_json(b), format_scalar(scalar(v))}));
    o["instantons"] = inst;
    return o;
}

inline json extension_json(const extension_class &e) {
    json o = json::object();
    o["n"] = e.n;
    o["order"] = e.order;
    o["grades"] = e.grades;
    json ns = json::array();
    for (const auto &m : e.N) ns.push_back(matrix_json(m));
    o["N"] = ns;
    o["Q"] = matrix_json(e.Q);
    json f = json::array();
    for (const auto &fj : e.f) f.push_back(series_json(fj));
    o["f"] = f;
    o["logE"] = series_json(e.logE);
    return o;
}

inline json problem_json(const problem &p) {
    json j = json::object();
    j["version"] = format_version;
    j["kind"] = p.kind;
    if (p.dim) j["dim"] = *p.dim;
    if (p.F) j["F"] = filtration_json(*p.F);
    if (p.W) j["W"] = filtration_json(*p.W);
    if (p.kind == "weight-filtration" || p.kind == "rel-weight") {
        j["N"] = matrix_json(p.N.at(0));
    } else if (!p.N.empty()) {
        json ns = json::array();
        for (const auto &m : p.N) ns.push_back(matrix_json(m));
        j["N"] = ns;
    }
    if (p.center) j["center"] = *p.center;
    if (p.polarization) {
        json o = json::object();
        for (const auto &[k, m] : *p.polarization) o[std::to_string(k)] = matrix_json(m);
        j["polarization"] = o;
    }
    if (p.kind == "higgs-extract" && p.nvars) j["nvars"] = *p.nvars;
    if (p.order) j["order"] = *p.order;
    if (p.gamma) j[p.kind == "orbit-reconstruct" ? "gamma1" : "gamma"] = series_json(*p.gamma);
    if (p.potential) j["potential"] = potential_json(*p.potential);
    if (p.perturbation) j["perturbation"] = series_json(*p.perturbation);
    if (p.coordinates) {
        json c = json::array();
        for (const auto &f : *p.coordinates) c.push_back(series_json(f));
        j["coordinates"] = c;
    }
    if (p.extension) j["extension"] = extension_json(*p.extension);
    if (p.count) j["count"] = *p.count;
    return j;
}

namespace detail {

inline bool has_object(const json &j) {
    if (j.is_object()) return true;
    if (j.is_array()) {
        for (const auto &x : j) {
            if (has_object(x)) return true;
        }
    }
    return false;
}

inline std::string one_line(const json &j) {
    if (!j.is_array()) return j.dump();
    std::string out = "[";
    for (std::size_t k = 0; k < j.size(); ++k) out += (k ? ", " : "") + one_line(j[k]);
    return out + "]";
}

inline void pretty(const json &j, int indent, std::string &out) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            out += pad + json(it.key()).dump() + ": ";
            pretty(it.value(), indent + 2, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
    } else if (j.is_array() && !j.empty() && (has_object(j) || one_line(j).size() + static_cast<std::size_t>(indent) > 80)) {
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            pretty(j[k], indent + 2, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
    } else if (j.is_array()) {
        out += one_line(j);
    } else {
        out += j.dump();
    }
}

} // namespace detail

// Two-space indented JSON. Arrays without objects that fit in 80 columns
// stay on one line.
inline std::string to_text(const json &j) {
    std::string out;
    detail::pretty(j, 0, out);
    return out + "\n";
}

inline std::string serialize_problem(const problem &p) { return to_text(problem_json(p)); }

inline bool same_potential(const gw_potential &a, const gw_potential &b) {
    return a.n == b.n && a.order == b.order && a.kappa == b.kappa && a.instantons == b.instantons;
}

inline bool same_extension(const extension_class &a, const extension_class &b) {
    return a.n == b.n && a.order == b.order && a.grades == b.grades && a.N == b.N && a.Q == b.Q && a.f == b.f &&
           a.logE == b.logE;
}

template <class T, class Eq>
bool same_optional(const std::optional<T> &a, const std::optional<T> &b, Eq eq) {
    if (a.has_value() != b.has_value()) return false;
    return !a || eq(*a, *b);
}

inline bool operator==(const problem &a, const problem &b) {
    auto eq = [](const auto &x, const auto &y) { return x == y; };
    return a.kind == b.kind && a.dim == b.dim && same_optional(a.F, b.F, eq) && same_optional(a.W, b.W, eq) &&
           a.N == b.N && a.center == b.center && same_optional(a.polarization, b.polarization, eq) &&
           a.nvars == b.nvars && a.order == b.order && same_optional(a.gamma, b.gamma, eq) &&
           same_optional(a.potential, b.potential, same_potential) &&
           same_optional(a.perturbation, b.perturbation, eq) && same_optional(a.coordinates, b.coordinates, eq) &&
           same_optional(a.extension, b.extension, same_extension) && a.count == b.count;
}

} // namespace hodge::io
