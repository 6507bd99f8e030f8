#pragma once

#include <cstdint>
#include <string>

#include "marginforge/prox.hpp"
#include "marginforge/sets.hpp"
#include "marginforge/trace.hpp"

namespace marginforge::io {

// csv: first column is the label (+1/-1), remaining columns are features; an
// optional header row is auto-detected by a non-numeric first field.
// libsvmText: "label idx:val ..." with 1-based indices; the dimension is the
// largest index seen in the file.
enum class DatasetFormat { Csv, LibsvmText };

struct DatasetFile {
    DatasetFormat format;
    std::string path;
};

LabeledDataset load(const DatasetFile& file);
LabeledDataset load_dataset(const std::string& path, DatasetFormat format);
void save_dataset(const LabeledDataset& ds, const std::string& path, DatasetFormat format);

// Two isotropic Gaussian blobs, labels +1 around centerPlus and -1 around
// centerMinus. Sampling is Box-Muller over splitmix64, so a fixed seed gives
// a bitwise-identical dataset.
struct BlobSpec {
    long mPerClass;
    int dim;
    Vector centerPlus;
    Vector centerMinus;
    double stddev;
    std::uint64_t seed;
};

LabeledDataset gen_blobs(const BlobSpec& spec);

enum class TraceFormat { Csv, Json };

// CSV columns exactly as recorded by the solver; JSON is an array of row
// objects with identical keys. Floats are printed with 17 significant digits
// so parsing them back is exact.
void write_trace(const SolverTrace& trace, const std::string& path, TraceFormat format);
SolverTrace read_trace_csv(const std::string& path);

// %.17g formatting shared by every writer.
std::string format_double(double v);

// JSON object {"kind": ..., parameters...} for set and regularizer specs.
std::string to_json(const sets::ConvexSetSpec& s);
sets::ConvexSetSpec set_from_json(const std::string& text);
std::string to_json(const prox::RegularizerSpec& h);
prox::RegularizerSpec regularizer_from_json(const std::string& text);

// CLI grammar:
//   whole | ball:<center csv>:<radius> | box:<lo csv>:<hi csv> | orthant
//   | halfspace:<normal csv>:<offset> | hyperplane:<normal csv>:<offset>
// `dim` fixes the dimension of whole/orthant and is checked against the rest.
sets::ConvexSetSpec parse_set_spec(const std::string& text, int dim);

// CLI grammar: zero | sqnorm:<coef> | l1:<coef> | indicator:<set spec>
prox::RegularizerSpec parse_regularizer_spec(const std::string& text, int dim);

}  // namespace marginforge::io
