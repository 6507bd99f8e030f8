#include "marginforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "marginforge/rng.hpp"

namespace marginforge::io {

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

bool parse_number(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

int label_from(double v, const std::string& path, long line) {
    if (v == 1.0) return 1;
    if (v == -1.0) return -1;
    parse_fail(path, line, "label must be +1 or -1");
}

LabeledDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::vector<LabeledSample> samples;
    int dim = -1;
    std::string lineText;
    long lineNo = 0;
    bool first = true;
    while (std::getline(in, lineText)) {
        ++lineNo;
        const std::string t = trim(lineText);
        if (t.empty()) continue;
        const auto fields = split(t, ',');
        double v;
        if (first && !parse_number(trim(fields[0]), v)) {
            first = false;  // header row
            continue;
        }
        first = false;
        if (fields.size() < 2) parse_fail(path, lineNo, "need a label and at least one feature");
        if (!parse_number(trim(fields[0]), v)) parse_fail(path, lineNo, "malformed label");
        const int y = label_from(v, path, lineNo);
        Vector x(static_cast<Eigen::Index>(fields.size()) - 1);
        for (size_t j = 1; j < fields.size(); ++j) {
            double fv;
            if (!parse_number(trim(fields[j]), fv)) parse_fail(path, lineNo, "malformed feature");
            x[static_cast<Eigen::Index>(j - 1)] = fv;
        }
        if (dim < 0) dim = static_cast<int>(x.size());
        if (x.size() != dim) parse_fail(path, lineNo, "inconsistent feature count");
        samples.push_back({std::move(x), y});
    }
    if (dim < 0) throw std::runtime_error(path + ": no samples found");
    return LabeledDataset(std::move(samples), dim);
}

LabeledDataset load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    struct Row {
        int y;
        std::vector<std::pair<long, double>> entries;
    };
    std::vector<Row> rows;
    long maxIndex = 0;
    std::string lineText;
    long lineNo = 0;
    while (std::getline(in, lineText)) {
        ++lineNo;
        const std::string t = trim(lineText);
        if (t.empty() || t[0] == '#') continue;
        std::stringstream ss(t);
        std::string tok;
        ss >> tok;
        double v;
        if (!parse_number(tok, v)) parse_fail(path, lineNo, "malformed label");
        Row row{label_from(v, path, lineNo), {}};
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) parse_fail(path, lineNo, "expected idx:val");
            double idxv, val;
            if (!parse_number(tok.substr(0, colon), idxv) || idxv < 1.0 ||
                idxv != std::floor(idxv)) {
                parse_fail(path, lineNo, "malformed 1-based index");
            }
            if (!parse_number(tok.substr(colon + 1), val)) {
                parse_fail(path, lineNo, "malformed value");
            }
            const long idx = static_cast<long>(idxv);
            maxIndex = std::max(maxIndex, idx);
            row.entries.emplace_back(idx, val);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || maxIndex == 0) throw std::runtime_error(path + ": no samples found");
    std::vector<LabeledSample> samples;
    samples.reserve(rows.size());
    for (const auto& row : rows) {
        Vector x = Vector::Zero(maxIndex);
        for (const auto& [idx, val] : row.entries) x[idx - 1] = val;
        samples.push_back({std::move(x), row.y});
    }
    return LabeledDataset(std::move(samples), static_cast<int>(maxIndex));
}

void write_or_fail(std::ofstream& out, const std::string& path) {
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LabeledDataset load(const DatasetFile& file) { return load_dataset(file.path, file.format); }

LabeledDataset load_dataset(const std::string& path, DatasetFormat format) {
    return format == DatasetFormat::Csv ? load_csv(path) : load_libsvm(path);
}

void save_dataset(const LabeledDataset& ds, const std::string& path, DatasetFormat format) {
    std::ofstream out(path);
    write_or_fail(out, path);
    if (format == DatasetFormat::Csv) {
        for (const auto& s : ds.samples()) {
            out << s.y;
            for (Eigen::Index j = 0; j < s.x.size(); ++j) out << ',' << format_double(s.x[j]);
            out << '\n';
        }
    } else {
        for (const auto& s : ds.samples()) {
            out << s.y;
            for (Eigen::Index j = 0; j < s.x.size(); ++j) {
                if (s.x[j] != 0.0) out << ' ' << (j + 1) << ':' << format_double(s.x[j]);
            }
            out << '\n';
        }
    }
    if (!out.good()) throw std::runtime_error(path + ": write failed");
}

LabeledDataset gen_blobs(const BlobSpec& spec) {
    if (spec.mPerClass < 1) throw std::invalid_argument("mPerClass must be >= 1");
    if (spec.dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (!(spec.stddev > 0.0)) throw std::invalid_argument("stddev must be > 0");
    if (spec.centerPlus.size() != spec.dim || spec.centerMinus.size() != spec.dim) {
        throw std::invalid_argument("blob centers must match dim");
    }
    SplitMix64 rng(spec.seed);
    std::vector<LabeledSample> samples;
    samples.reserve(static_cast<size_t>(2 * spec.mPerClass));
    const auto draw = [&](const Vector& center, int label) {
        for (long i = 0; i < spec.mPerClass; ++i) {
            Vector x(spec.dim);
            for (int j = 0; j < spec.dim; ++j) {
                x[j] = center[j] + spec.stddev * rng.next_gaussian();
            }
            samples.push_back({std::move(x), label});
        }
    };
    draw(spec.centerPlus, 1);
    draw(spec.centerMinus, -1);
    return LabeledDataset(std::move(samples), spec.dim);
}

void write_trace(const SolverTrace& trace, const std::string& path, TraceFormat format) {
    std::ofstream out(path);
    write_or_fail(out, path);
    if (format == TraceFormat::Csv) {
        for (size_t i = 0; i < trace.columns.size(); ++i) {
            if (i) out << ',';
            out << trace.columns[i];
        }
        out << '\n';
        for (const auto& row : trace.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << format_double(row[i]);
            }
            out << '\n';
        }
    } else {
        // hand-rolled so numbers carry the same 17-digit formatting as CSV
        out << "[";
        for (size_t r = 0; r < trace.rows.size(); ++r) {
            out << (r ? ",\n " : "\n ") << "{";
            for (size_t i = 0; i < trace.columns.size(); ++i) {
                if (i) out << ",";
                out << '"' << trace.columns[i] << "\":" << format_double(trace.rows[r][i]);
            }
            out << "}";
        }
        out << "\n]\n";
    }
    if (!out.good()) throw std::runtime_error(path + ": write failed");
}

SolverTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    SolverTrace trace;
    std::string lineText;
    if (!std::getline(in, lineText)) throw std::runtime_error(path + ": missing header");
    for (auto& c : split(trim(lineText), ',')) trace.columns.push_back(trim(c));
    long lineNo = 1;
    while (std::getline(in, lineText)) {
        ++lineNo;
        const std::string t = trim(lineText);
        if (t.empty()) continue;
        const auto fields = split(t, ',');
        if (fields.size() != trace.columns.size()) parse_fail(path, lineNo, "column count");
        std::vector<double> row(fields.size());
        for (size_t i = 0; i < fields.size(); ++i) {
            if (!parse_number(trim(fields[i]), row[i])) parse_fail(path, lineNo, "malformed number");
        }
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

namespace {

nlohmann::ordered_json vector_to_json(const Vector& v) {
    auto a = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector vector_from_json(const nlohmann::json& j) {
    Vector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& e : j) v[i++] = e.get<double>();
    return v;
}

}  // namespace

std::string to_json(const sets::ConvexSetSpec& s) {
    nlohmann::ordered_json j;
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, sets::WholeSpace>) {
                j["kind"] = "whole";
                j["dim"] = v.dim;
            } else if constexpr (std::is_same_v<T, sets::Ball>) {
                j["kind"] = "ball";
                j["center"] = vector_to_json(v.center);
                j["radius"] = v.radius;
            } else if constexpr (std::is_same_v<T, sets::Box>) {
                j["kind"] = "box";
                j["lower"] = vector_to_json(v.lower);
                j["upper"] = vector_to_json(v.upper);
            } else if constexpr (std::is_same_v<T, sets::NonnegOrthant>) {
                j["kind"] = "orthant";
                j["dim"] = v.dim;
            } else if constexpr (std::is_same_v<T, sets::Halfspace>) {
                j["kind"] = "halfspace";
                j["normal"] = vector_to_json(v.normal);
                j["offset"] = v.offset;
            } else {
                j["kind"] = "hyperplane";
                j["normal"] = vector_to_json(v.normal);
                j["offset"] = v.offset;
            }
        },
        s);
    return j.dump();
}

sets::ConvexSetSpec set_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "whole") return sets::whole_space(j.at("dim").get<int>());
    if (kind == "ball") {
        return sets::ball(vector_from_json(j.at("center")), j.at("radius").get<double>());
    }
    if (kind == "box") {
        return sets::box(vector_from_json(j.at("lower")), vector_from_json(j.at("upper")));
    }
    if (kind == "orthant") return sets::nonneg_orthant(j.at("dim").get<int>());
    if (kind == "halfspace") {
        return sets::halfspace(vector_from_json(j.at("normal")), j.at("offset").get<double>());
    }
    if (kind == "hyperplane") {
        return sets::hyperplane(vector_from_json(j.at("normal")), j.at("offset").get<double>());
    }
    throw std::runtime_error("unknown set kind: " + kind);
}

std::string to_json(const prox::RegularizerSpec& h) {
    nlohmann::ordered_json j;
    std::visit(
        [&j](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, prox::Zero>) {
                j["kind"] = "zero";
            } else if constexpr (std::is_same_v<T, prox::ScaledSqNorm>) {
                j["kind"] = "sqnorm";
                j["coef"] = v.coef;
            } else if constexpr (std::is_same_v<T, prox::ScaledL1>) {
                j["kind"] = "l1";
                j["coef"] = v.coef;
            } else {
                j["kind"] = "indicator";
                j["set"] = nlohmann::ordered_json::parse(to_json(v.set));
            }
        },
        h);
    return j.dump();
}

prox::RegularizerSpec regularizer_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return prox::zero();
    if (kind == "sqnorm") return prox::scaled_sq_norm(j.at("coef").get<double>());
    if (kind == "l1") return prox::scaled_l1(j.at("coef").get<double>());
    if (kind == "indicator") return prox::set_indicator(set_from_json(j.at("set").dump()));
    throw std::runtime_error("unknown regularizer kind: " + kind);
}

namespace {

Vector parse_csv_vector(const std::string& text) {
    const auto fields = split(text, ',');
    if (fields.empty()) throw std::invalid_argument("empty vector in set spec");
    Vector v(static_cast<Eigen::Index>(fields.size()));
    for (size_t i = 0; i < fields.size(); ++i) {
        double d;
        if (!parse_number(trim(fields[i]), d)) {
            throw std::invalid_argument("malformed number in set spec: " + fields[i]);
        }
        v[static_cast<Eigen::Index>(i)] = d;
    }
    return v;
}

double parse_scalar(const std::string& text) {
    double d;
    if (!parse_number(trim(text), d)) {
        throw std::invalid_argument("malformed number in spec: " + text);
    }
    return d;
}

void check_spec_dim(int got, int want) {
    if (got != want) {
        throw std::invalid_argument("set spec dimension " + std::to_string(got) +
                                    " does not match expected " + std::to_string(want));
    }
}

}  // namespace

sets::ConvexSetSpec parse_set_spec(const std::string& text, int dim) {
    const auto parts = split(trim(text), ':');
    const std::string kind = trim(parts[0]);
    if (kind == "whole") {
        if (parts.size() != 1) throw std::invalid_argument("whole takes no parameters");
        return sets::whole_space(dim);
    }
    if (kind == "orthant") {
        if (parts.size() != 1) throw std::invalid_argument("orthant takes no parameters");
        return sets::nonneg_orthant(dim);
    }
    if (kind == "ball") {
        if (parts.size() != 3) throw std::invalid_argument("expected ball:<center csv>:<radius>");
        auto s = sets::ball(parse_csv_vector(parts[1]), parse_scalar(parts[2]));
        check_spec_dim(sets::dim(s), dim);
        return s;
    }
    if (kind == "box") {
        if (parts.size() != 3) throw std::invalid_argument("expected box:<lo csv>:<hi csv>");
        auto s = sets::box(parse_csv_vector(parts[1]), parse_csv_vector(parts[2]));
        check_spec_dim(sets::dim(s), dim);
        return s;
    }
    if (kind == "halfspace") {
        if (parts.size() != 3) {
            throw std::invalid_argument("expected halfspace:<normal csv>:<offset>");
        }
        auto s = sets::halfspace(parse_csv_vector(parts[1]), parse_scalar(parts[2]));
        check_spec_dim(sets::dim(s), dim);
        return s;
    }
    if (kind == "hyperplane") {
        if (parts.size() != 3) {
            throw std::invalid_argument("expected hyperplane:<normal csv>:<offset>");
        }
        auto s = sets::hyperplane(parse_csv_vector(parts[1]), parse_scalar(parts[2]));
        check_spec_dim(sets::dim(s), dim);
        return s;
    }
    throw std::invalid_argument("unknown set kind: " + kind);
}

prox::RegularizerSpec parse_regularizer_spec(const std::string& text, int dim) {
    const std::string t = trim(text);
    if (t == "zero") return prox::zero();
    const auto colon = t.find(':');
    const std::string kind = colon == std::string::npos ? t : t.substr(0, colon);
    if (kind == "sqnorm" || kind == "l1") {
        if (colon == std::string::npos) {
            throw std::invalid_argument("expected " + kind + ":<coef>");
        }
        const double coef = parse_scalar(t.substr(colon + 1));
        return kind == "sqnorm" ? prox::scaled_sq_norm(coef) : prox::scaled_l1(coef);
    }
    if (kind == "indicator") {
        if (colon == std::string::npos) {
            throw std::invalid_argument("expected indicator:<set spec>");
        }
        return prox::set_indicator(parse_set_spec(t.substr(colon + 1), dim));
    }
    throw std::invalid_argument("unknown regularizer kind: " + kind);
}

}  // namespace marginforge::io
