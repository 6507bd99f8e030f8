#include "marginforge/core.hpp"

#include <cmath>

namespace marginforge {

namespace {

void check_sample(const LabeledSample& s, int dim) {
    if (s.y != 1 && s.y != -1) {
        throw std::invalid_argument("label must be +1 or -1");
    }
    if (s.x.size() != dim) {
        throw std::invalid_argument("sample dimension mismatch");
    }
    if (!s.x.allFinite()) {
        throw std::invalid_argument("sample has nonfinite entries");
    }
}

}  // namespace

LabeledDataset::LabeledDataset(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

LabeledDataset::LabeledDataset(std::vector<LabeledSample> samples, int dim)
    : samples_(std::move(samples)), dim_(dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    for (const auto& s : samples_) check_sample(s, dim_);
}

Matrix LabeledDataset::feature_rows() const {
    Matrix X(size(), dim_);
    for (long i = 0; i < size(); ++i) X.row(i) = samples_[static_cast<size_t>(i)].x;
    return X;
}

Vector LabeledDataset::labels() const {
    Vector y(size());
    for (long i = 0; i < size(); ++i) y[i] = samples_[static_cast<size_t>(i)].y;
    return y;
}

KernelSpec KernelSpec::linear() {
    KernelSpec k;
    k.kind_ = KernelKind::Linear;
    return k;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    if (degree < 1) throw std::invalid_argument("polynomial degree must be >= 1");
    if (offset < 0.0) throw std::invalid_argument("polynomial offset must be >= 0");
    KernelSpec k;
    k.kind_ = KernelKind::Polynomial;
    k.degree_ = degree;
    k.offset_ = offset;
    return k;
}

KernelSpec KernelSpec::rbf(double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("rbf bandwidth must be > 0");
    KernelSpec k;
    k.kind_ = KernelKind::Rbf;
    k.bandwidth_ = bandwidth;
    return k;
}

double kernel_eval(const KernelSpec& k, const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kernel argument dimension mismatch");
    switch (k.kind()) {
        case KernelKind::Linear:
            return a.dot(b);
        case KernelKind::Polynomial:
            return std::pow(a.dot(b) + k.offset(), k.degree());
        case KernelKind::Rbf: {
            const double s = k.bandwidth();
            return std::exp(-(a - b).squaredNorm() / (2.0 * s * s));
        }
    }
    throw std::logic_error("unknown kernel kind");
}

LabeledDataset augment(const LabeledDataset& ds, double biasScale) {
    if (ds.augmented()) throw std::invalid_argument("dataset is already augmented");
    if (!(biasScale > 0.0)) throw std::invalid_argument("biasScale must be > 0");
    LabeledDataset out(ds.dim() + 1);
    out.augmented_ = true;
    out.bias_scale_ = biasScale;
    out.samples_.reserve(ds.samples().size());
    const double tail = 1.0 / biasScale;
    for (const auto& s : ds.samples()) {
        Vector x(ds.dim() + 1);
        x.head(ds.dim()) = s.x;
        x[ds.dim()] = tail;
        out.samples_.push_back({std::move(x), s.y});
    }
    return out;
}

std::pair<Vector, double> split_bias(const Vector& wHat, double biasScale) {
    if (wHat.size() < 2) throw std::invalid_argument("split_bias needs dimension >= 2");
    if (!(biasScale > 0.0)) throw std::invalid_argument("biasScale must be > 0");
    Vector w = wHat.head(wHat.size() - 1);
    const double b = wHat[wHat.size() - 1] / biasScale;
    return {std::move(w), b};
}

Matrix gram(const LabeledDataset& ds, const KernelSpec& k, bool signedEntries) {
    const long m = ds.size();
    Matrix G(m, m);
    const auto& samples = ds.samples();
    for (long i = 0; i < m; ++i) {
        for (long j = i; j < m; ++j) {
            double v = kernel_eval(k, samples[static_cast<size_t>(i)].x,
                                   samples[static_cast<size_t>(j)].x);
            if (signedEntries) {
                v *= samples[static_cast<size_t>(i)].y * samples[static_cast<size_t>(j)].y;
            }
            G(i, j) = v;
            G(j, i) = v;
        }
    }
    return G;
}

Matrix signed_feature_matrix(const LabeledDataset& ds) {
    Matrix A(ds.dim(), ds.size());
    for (long j = 0; j < ds.size(); ++j) {
        const auto& s = ds.samples()[static_cast<size_t>(j)];
        A.col(j) = s.y * s.x;
    }
    return A;
}

}  // namespace marginforge
