// marginforge command line: data generation, primal and dual training,
// KKT diagnostics, and primal/dual comparison.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 numerical failure
// (nonfinite values), 3 infeasibility report.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "marginforge/diagnostics.hpp"
#include "marginforge/dual_solver.hpp"
#include "marginforge/io.hpp"
#include "marginforge/primal_solver.hpp"

namespace mf = marginforge;

namespace {

mf::io::DatasetFormat parse_data_format(const std::string& name) {
    if (name == "csv") return mf::io::DatasetFormat::Csv;
    if (name == "libsvm") return mf::io::DatasetFormat::LibsvmText;
    throw CLI::ValidationError("--format", "expected csv or libsvm");
}

mf::io::TraceFormat parse_trace_format(const std::string& name) {
    if (name == "csv") return mf::io::TraceFormat::Csv;
    if (name == "json") return mf::io::TraceFormat::Json;
    throw CLI::ValidationError("--trace-format", "expected csv or json");
}

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(field);
    return out;
}

mf::Vector parse_vector_flag(const std::string& text) {
    const auto parts = split_on(text, ',');
    mf::Vector v(static_cast<Eigen::Index>(parts.size()));
    for (size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
    return v;
}

mf::KernelSpec parse_kernel_flag(const std::string& text) {
    if (text == "linear") return mf::KernelSpec::linear();
    const auto parts = split_on(text, ':');
    if (parts[0] == "poly" && parts.size() == 3) {
        return mf::KernelSpec::polynomial(std::stoi(parts[1]), std::stod(parts[2]));
    }
    if (parts[0] == "rbf" && parts.size() == 2) {
        return mf::KernelSpec::rbf(std::stod(parts[1]));
    }
    throw CLI::ValidationError("--kernel", "expected linear, poly:<degree>:<offset> or rbf:<sigma>");
}

// Timing varies run to run; traces are byte-reproducible by default, so the
// ns column is zeroed unless the user asks for wall-clock values.
mf::SolverTrace strip_timing(mf::SolverTrace trace, bool keepWallClock) {
    if (keepWallClock) return trace;
    const int col = trace.column_index("ns");
    if (col >= 0) {
        for (auto& row : trace.rows) row[static_cast<size_t>(col)] = 0.0;
    }
    return trace;
}

void emit(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(outPath);
        if (!out) throw std::runtime_error(outPath + ": cannot open for writing");
        out << text << '\n';
    }
}

nlohmann::ordered_json vector_json(const mf::Vector& v) {
    auto a = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

mf::Vector vector_from(const nlohmann::json& j) {
    mf::Vector v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const auto& e : j) v[i++] = e.get<double>();
    return v;
}

struct CommonDataFlags {
    std::string dataPath;
    std::string dataFormat = "csv";
    double biasScale = 1.0;

    mf::LabeledDataset load_augmented() const {
        auto ds = mf::io::load_dataset(dataPath, parse_data_format(dataFormat));
        return mf::augment(ds, biasScale);
    }
};

void add_data_flags(CLI::App* cmd, CommonDataFlags& f) {
    cmd->add_option("--data", f.dataPath, "dataset path")->required();
    cmd->add_option("--format", f.dataFormat, "dataset format: csv|libsvm");
    cmd->add_option("--bias-scale", f.biasScale,
                    "bias augmentation scale (appends 1/biasScale to every sample)");
}

int run_gen_data(const std::string& outPath, const std::string& outFormat, long mPerClass, int dim,
                 const std::string& centerPlus, const std::string& centerMinus, double stddev,
                 std::uint64_t seed) {
    mf::io::BlobSpec spec;
    spec.mPerClass = mPerClass;
    spec.dim = dim;
    spec.stddev = stddev;
    spec.seed = seed;
    spec.centerPlus =
        centerPlus.empty() ? mf::Vector::Constant(dim, 3.0) : parse_vector_flag(centerPlus);
    spec.centerMinus =
        centerMinus.empty() ? mf::Vector::Zero(dim) : parse_vector_flag(centerMinus);
    const auto ds = mf::io::gen_blobs(spec);
    mf::io::save_dataset(ds, outPath, parse_data_format(outFormat));
    std::cerr << "wrote " << ds.size() << " samples of dimension " << ds.dim() << " to " << outPath
              << '\n';
    return 0;
}

nlohmann::ordered_json model_json(const mf::Vector& w, const mf::Vector& lambda,
                                  const std::optional<std::string>& thetaJson,
                                  const std::optional<std::string>& regJson,
                                  std::optional<double> C, double biasScale,
                                  nlohmann::ordered_json extra) {
    nlohmann::ordered_json j;
    j["w"] = vector_json(w);
    j["lambda"] = vector_json(lambda);
    if (thetaJson) j["theta"] = nlohmann::ordered_json::parse(*thetaJson);
    if (regJson) j["regularizer"] = nlohmann::ordered_json::parse(*regJson);
    if (C) {
        j["C"] = *C;
    } else {
        j["C"] = nullptr;
    }
    nlohmann::ordered_json meta;
    meta["bias_scale"] = biasScale;
    for (auto& [k, v] : extra.items()) meta[k] = v;
    j["metadata"] = std::move(meta);
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("MARGIN_FORGE_THREADS")) {
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));
    }

    CLI::App app{"constrained SVM solvers: projected subgradient and Lagrange-dual gradient"};
    app.require_subcommand(1);

    // --- gen-data ---------------------------------------------------------
    auto* gen = app.add_subcommand("gen-data", "generate two Gaussian blobs");
    long genM = 250;
    int genDim = 2;
    std::string genCenterPlus, genCenterMinus, genOut, genFormat = "csv";
    double genStddev = 0.75;
    std::uint64_t genSeed = 0;
    gen->add_option("--m", genM, "samples per class");
    gen->add_option("--dim", genDim, "feature dimension");
    gen->add_option("--center-plus", genCenterPlus, "csv center of the +1 class (default 3,...,3)");
    gen->add_option("--center-minus", genCenterMinus, "csv center of the -1 class (default 0,...,0)");
    gen->add_option("--stddev", genStddev, "isotropic standard deviation");
    gen->add_option("--seed", genSeed, "prng seed");
    gen->add_option("--out", genOut, "output dataset path")->required();
    gen->add_option("--out-format", genFormat, "csv|libsvm");

    // --- train-primal -----------------------------------------------------
    auto* primal = app.add_subcommand("train-primal", "projected subgradient on the soft margin");
    CommonDataFlags primalData;
    add_data_flags(primal, primalData);
    std::string primalTheta = "whole", primalSchedule = "hybrid", primalTrace,
                primalTraceFormat = "csv", primalModel;
    double primalC = 1.0, primalR = -1.0;
    long primalIters = 10000, primalRecordEvery = 1, primalBatch = 0;
    std::uint64_t primalSeed = 0;
    bool primalWallClock = false;
    primal->add_option("--theta", primalTheta, "constraint set spec (on the augmented vector)");
    primal->add_option("--C", primalC, "hinge penalty");
    primal->add_option("--schedule", primalSchedule, "hybrid|pegasos");
    primal->add_option("--r", primalR, "hybrid shift (default max(16 L^2/gamma^2, 16))");
    primal->add_option("--max-iter", primalIters, "iteration count");
    primal->add_option("--seed", primalSeed, "prng seed (stochastic sampling)");
    primal->add_option("--batch", primalBatch, "mini-batch size; 0 = full subgradient");
    primal->add_option("--record-every", primalRecordEvery, "trace row spacing");
    primal->add_option("--trace", primalTrace, "trace output path");
    primal->add_option("--trace-format", primalTraceFormat, "csv|json");
    primal->add_option("--model", primalModel, "model JSON output path");
    primal->add_flag("--wall-clock", primalWallClock, "keep real timings in the trace ns column");

    // --- train-dual -------------------------------------------------------
    auto* dualCmd = app.add_subcommand("train-dual", "projected gradient on the Lagrange dual");
    CommonDataFlags dualData;
    add_data_flags(dualCmd, dualData);
    std::string dualTheta = "whole", dualReg, dualKernel = "linear", dualTrace,
                dualTraceFormat = "csv", dualModel;
    double dualC = 1.0, dualTol = 1e-8, dualInfeasibleAbove = 1e9;
    bool dualHard = false, dualWallClock = false, dualNoAccel = false;
    long dualIters = 5000, dualRecordEvery = 1;
    dualCmd->add_option("--theta", dualTheta, "constraint set spec (on the augmented vector)");
    dualCmd->add_option("--reg", dualReg, "regularizer spec (replaces --theta coupling)");
    dualCmd->add_option("--C", dualC, "hinge penalty (box dual)");
    dualCmd->add_flag("--hard", dualHard, "hard margin (orthant dual, ignores --C)");
    dualCmd->add_option("--kernel", dualKernel, "linear|poly:<d>:<c>|rbf:<sigma>");
    dualCmd->add_option("--tol", dualTol, "gradient-mapping stopping tolerance");
    dualCmd->add_option("--max-iter", dualIters, "iteration cap");
    dualCmd->add_option("--infeasible-above", dualInfeasibleAbove,
                        "report infeasibility when the dual value exceeds this bound "
                        "(weak duality: every feasible w then has objective above it)");
    dualCmd->add_flag("--no-accel", dualNoAccel, "plain projected gradient (no momentum)");
    dualCmd->add_option("--record-every", dualRecordEvery, "trace row spacing");
    dualCmd->add_option("--trace", dualTrace, "trace output path");
    dualCmd->add_option("--trace-format", dualTraceFormat, "csv|json");
    dualCmd->add_option("--model", dualModel, "model JSON output path");
    dualCmd->add_flag("--wall-clock", dualWallClock, "keep real timings in the trace ns column");

    // --- diagnose ---------------------------------------------------------
    auto* diag = app.add_subcommand("diagnose", "KKT residuals and support vector classes");
    CommonDataFlags diagData;
    add_data_flags(diag, diagData);
    std::string diagModel, diagOut;
    double diagSvTol = -1.0;
    diag->add_option("--model", diagModel, "model JSON path")->required();
    diag->add_option("--sv-tol", diagSvTol,
                     "support-vector classification tolerance (default 1e-6 C/m boxed, 1e-8 hard)");
    diag->add_option("--out", diagOut, "report output path (default stdout)");

    // --- compare ----------------------------------------------------------
    auto* cmp = app.add_subcommand("compare", "run both solver paths and report the gap");
    CommonDataFlags cmpData;
    add_data_flags(cmp, cmpData);
    std::string cmpTheta = "whole", cmpOut;
    double cmpC = 1.0, cmpTol = 1e-8;
    long cmpIters = 10000;
    cmp->add_option("--theta", cmpTheta, "constraint set spec (on the augmented vector)");
    cmp->add_option("--C", cmpC, "hinge penalty");
    cmp->add_option("--iters", cmpIters, "iteration budget for each path");
    cmp->add_option("--tol", cmpTol, "dual stopping tolerance");
    cmp->add_option("--out", cmpOut, "report output path (default stdout)");

    try {
        app.parse(argc, argv);

        if (gen->parsed()) {
            return run_gen_data(genOut, genFormat, genM, genDim, genCenterPlus, genCenterMinus,
                                genStddev, genSeed);
        }

        if (primal->parsed()) {
            const auto ds = primalData.load_augmented();
            const auto theta = mf::io::parse_set_spec(primalTheta, ds.dim());
            mf::problems::SoftMarginProblem problem(ds, theta, primalC);
            const auto consts = mf::problems::constants(problem);
            mf::primal::StepSchedule schedule =
                primalSchedule == "pegasos"
                    ? mf::primal::pegasos_schedule(consts.gamma)
                    : (primalR > 0.0 ? mf::primal::hybrid_schedule(consts, primalR)
                                     : mf::primal::hybrid_schedule(consts));
            if (primalSchedule != "pegasos" && primalSchedule != "hybrid") {
                throw CLI::ValidationError("--schedule", "expected hybrid or pegasos");
            }
            mf::primal::PrimalConfig cfg;
            cfg.maxIter = primalIters;
            cfg.seed = primalSeed;
            cfg.recordEvery = primalRecordEvery;
            cfg.batchSize = primalBatch;
            const mf::Vector w1 = mf::sets::project(theta, mf::Vector::Zero(ds.dim()));
            const auto result = primalBatch > 0
                                    ? mf::primal::solve_stochastic(problem, schedule, cfg, w1)
                                    : mf::primal::solve_subgradient(problem, schedule, cfg, w1);
            std::cerr << "train-primal: best value " << result.bestValue << " after " << primalIters
                      << " iterations\n";
            if (!primalTrace.empty()) {
                mf::io::write_trace(strip_timing(result.trace, primalWallClock), primalTrace,
                                    parse_trace_format(primalTraceFormat));
            }
            if (!primalModel.empty()) {
                nlohmann::ordered_json extra;
                extra["best_value"] = result.bestValue;
                extra["schedule"] = primalSchedule;
                const auto j = model_json(result.wAvg, mf::Vector(0), mf::io::to_json(theta), {},
                                          primalC, primalData.biasScale, std::move(extra));
                emit(j.dump(2), primalModel);
            }
            return 0;
        }

        if (dualCmd->parsed()) {
            const auto ds = dualData.load_augmented();
            const auto kernel = parse_kernel_flag(dualKernel);
            const mf::dual::FeasibleRegion feasible =
                dualHard ? mf::dual::FeasibleRegion{mf::dual::OrthantFeasible{}}
                         : mf::dual::FeasibleRegion{
                               mf::dual::BoxFeasible{dualC / static_cast<double>(ds.size())}};
            std::optional<std::string> thetaJson, regJson;
            mf::dual::DualProblem dp = [&] {
                if (!dualReg.empty()) {
                    if (kernel.kind() != mf::KernelKind::Linear) {
                        throw CLI::ValidationError("--reg", "regularizer coupling requires --kernel linear");
                    }
                    const auto reg = mf::io::parse_regularizer_spec(dualReg, ds.dim());
                    regJson = mf::io::to_json(reg);
                    return mf::dual::DualProblem::from_operator(
                        mf::signed_feature_matrix(ds), feasible, mf::dual::Regularizer{reg});
                }
                const auto theta = mf::io::parse_set_spec(dualTheta, ds.dim());
                thetaJson = mf::io::to_json(theta);
                return mf::dual::DualProblem::from_kernel(ds, kernel, feasible, theta);
            }();

            mf::dual::DualConfig cfg;
            cfg.maxIter = dualIters;
            cfg.tolerance = dualTol;
            cfg.accelerated = !dualNoAccel;
            cfg.recordEvery = dualRecordEvery;
            const auto result = mf::dual::solve(dp, cfg, mf::Vector::Zero(ds.size()));
            if (-result.dualValue > dualInfeasibleAbove) {
                throw mf::InfeasibleProblem(
                    "dual value exceeded " + std::to_string(dualInfeasibleAbove) +
                    "; by weak duality no feasible point has objective below that bound "
                    "(the margin constraints are unsatisfiable at this scale)");
            }
            std::cerr << "train-dual: dual value " << result.dualValue << ", "
                      << (result.converged ? "converged" : "iteration cap reached") << " after "
                      << result.iterations << " iterations\n";
            if (!dualTrace.empty()) {
                mf::io::write_trace(strip_timing(result.trace, dualWallClock), dualTrace,
                                    parse_trace_format(dualTraceFormat));
            }
            if (!dualModel.empty()) {
                nlohmann::ordered_json extra;
                extra["dual_value"] = result.dualValue;
                extra["converged"] = result.converged;
                extra["iterations"] = result.iterations;
                if (dp.has_primal_operator()) {
                    extra["gap"] = mf::diagnostics::duality_gap(
                        mf::dual::primal_objective(dp, result.wRecovered), -result.dualValue);
                }
                const auto j = model_json(
                    result.wRecovered, result.lambda, thetaJson, regJson,
                    dualHard ? std::nullopt : std::optional<double>(dualC), dualData.biasScale,
                    std::move(extra));
                emit(j.dump(2), dualModel);
            }
            return 0;
        }

        if (diag->parsed()) {
            std::ifstream in(diagModel);
            if (!in) throw std::runtime_error(diagModel + ": cannot open for reading");
            const auto model = nlohmann::json::parse(in);
            diagData.biasScale = model.at("metadata").at("bias_scale").get<double>();
            const auto ds = diagData.load_augmented();
            const mf::Vector w = vector_from(model.at("w"));
            const mf::Vector lambda = vector_from(model.at("lambda"));
            if (lambda.size() == 0) {
                throw std::runtime_error(
                    "model carries no multipliers; diagnose needs a train-dual model");
            }

            const bool hard = model.at("C").is_null();
            const double C = hard ? 0.0 : model.at("C").get<double>();
            const double boxUpper = hard ? 0.0 : C / static_cast<double>(ds.size());
            const mf::dual::FeasibleRegion feasible =
                hard ? mf::dual::FeasibleRegion{mf::dual::OrthantFeasible{}}
                     : mf::dual::FeasibleRegion{mf::dual::BoxFeasible{boxUpper}};
            const mf::dual::Coupler coupler = [&]() -> mf::dual::Coupler {
                if (model.contains("regularizer") && !model.at("regularizer").is_null()) {
                    return mf::dual::Regularizer{
                        mf::io::regularizer_from_json(model.at("regularizer").dump())};
                }
                return mf::dual::SetTheta{mf::io::set_from_json(model.at("theta").dump())};
            }();
            const auto dp =
                mf::dual::DualProblem::from_operator(mf::signed_feature_matrix(ds), feasible, coupler);

            const auto kkt = mf::diagnostics::kkt_report(dp, w, lambda);
            const double svTol = diagSvTol > 0.0 ? diagSvTol : (hard ? 1e-8 : 1e-6 * boxUpper);
            const auto sv = mf::diagnostics::support_vectors(
                lambda, hard ? std::nullopt : std::optional<double>(boxUpper), svTol);
            const double dualValue = mf::dual::dual_value(dp, lambda);
            const double primalValue = mf::dual::primal_objective(dp, w);
            const double gap = mf::diagnostics::duality_gap(primalValue, -dualValue);

            nlohmann::ordered_json j;
            j["kkt"] = nlohmann::ordered_json::parse(mf::diagnostics::to_json(kkt));
            j["support_vectors"] = nlohmann::ordered_json::parse(mf::diagnostics::to_json(sv));
            j["primal_value"] = primalValue;
            j["dual_value_max_orientation"] = -dualValue;
            j["duality_gap"] = gap;
            j["weak_duality_violated"] = mf::diagnostics::weak_duality_violated(gap);
            emit(j.dump(2), diagOut);
            return 0;
        }

        if (cmp->parsed()) {
            const auto ds = cmpData.load_augmented();
            const auto theta = mf::io::parse_set_spec(cmpTheta, ds.dim());
            mf::problems::SoftMarginProblem problem(ds, theta, cmpC);

            const auto consts = mf::problems::constants(problem);
            mf::primal::PrimalConfig pcfg;
            pcfg.maxIter = cmpIters;
            pcfg.recordEvery = cmpIters;
            const mf::Vector w1 = mf::sets::project(theta, mf::Vector::Zero(ds.dim()));
            const auto presult = mf::primal::solve_subgradient(
                problem, mf::primal::hybrid_schedule(consts), pcfg, w1);
            const double primalValue = mf::problems::soft_objective(problem, presult.wAvg);

            const auto dp = mf::dual::DualProblem::from_soft(problem);
            mf::dual::DualConfig dcfg;
            dcfg.maxIter = cmpIters;
            dcfg.tolerance = cmpTol;
            dcfg.recordEvery = cmpIters;
            const auto dresult = mf::dual::solve(dp, dcfg, mf::Vector::Zero(ds.size()));

            const double gap = mf::diagnostics::duality_gap(primalValue, -dresult.dualValue);
            nlohmann::ordered_json j;
            j["primal_value"] = primalValue;
            j["dual_value_max_orientation"] = -dresult.dualValue;
            j["gap"] = gap;
            j["weak_duality_violated"] = mf::diagnostics::weak_duality_violated(gap);
            j["primal_best_value"] = presult.bestValue;
            j["dual_converged"] = dresult.converged;
            emit(j.dump(2), cmpOut);
            return 0;
        }

        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const mf::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const mf::InfeasibleProblem& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
