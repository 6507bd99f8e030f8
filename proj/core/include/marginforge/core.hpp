#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <utility>
#include <vector>

namespace marginforge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when a solver or evaluation produces a nonfinite value.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a problem is detected to have no feasible point.
struct InfeasibleProblem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LabeledSample {
    Vector x;
    int y;  // +1 or -1
};

// Training set with a shared feature dimension. `augmented()` marks datasets
// produced by augment(): every sample carries a trailing 1/biasScale
// coordinate so the bias is absorbed into the weight vector.
class LabeledDataset {
public:
    // Empty dataset of the given dimension.
    explicit LabeledDataset(int dim);

    // Validates labels in {-1,+1}, finite entries and consistent dimensions.
    LabeledDataset(std::vector<LabeledSample> samples, int dim);

    const std::vector<LabeledSample>& samples() const { return samples_; }
    long size() const { return static_cast<long>(samples_.size()); }
    int dim() const { return dim_; }
    bool augmented() const { return augmented_; }
    double bias_scale() const { return bias_scale_; }

    // m x dim matrix of raw feature rows and the matching label vector.
    Matrix feature_rows() const;
    Vector labels() const;

    friend LabeledDataset augment(const LabeledDataset& ds, double biasScale);

private:
    std::vector<LabeledSample> samples_;
    int dim_ = 0;
    bool augmented_ = false;
    double bias_scale_ = 1.0;
};

enum class KernelKind { Linear, Polynomial, Rbf };

class KernelSpec {
public:
    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset);
    static KernelSpec rbf(double bandwidth);

    KernelKind kind() const { return kind_; }
    int degree() const { return degree_; }
    double offset() const { return offset_; }
    double bandwidth() const { return bandwidth_; }

private:
    KernelSpec() = default;
    KernelKind kind_ = KernelKind::Linear;
    int degree_ = 1;
    double offset_ = 0.0;
    double bandwidth_ = 1.0;
};

double kernel_eval(const KernelSpec& k, const Vector& a, const Vector& b);

// Appends 1/biasScale to every sample so the bias is absorbed: x_hat = [x, 1/biasScale].
// A separating pair (w, b) then corresponds to w_hat = [w, biasScale * b].
LabeledDataset augment(const LabeledDataset& ds, double biasScale);

// Inverse of the augment embedding: splits w_hat into (w, b) with
// b = last coordinate / biasScale.
std::pair<Vector, double> split_bias(const Vector& wHat, double biasScale);

// m x m kernel matrix; signedEntries multiplies entry (i,j) by y_i * y_j.
Matrix gram(const LabeledDataset& ds, const KernelSpec& k, bool signedEntries);

// dim x m matrix whose column j is y_j * x_j.
Matrix signed_feature_matrix(const LabeledDataset& ds);

}  // namespace marginforge
