#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace hsde {

enum class ModelKind { GeneralPower, Pitchfork, SubcriticalPitchfork, SaddleNode };

std::string_view to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Raw parameter set of dx = (lambda x + g(x)) dt + gamma(x) dW.
///
/// For the named specializations most fields are derived (see ModelSpec);
/// only GeneralPower uses every field as given.
struct ModelParams {
    ModelKind kind = ModelKind::Pitchfork;
    double lambda = 0.0;
    double sigma = 0.0;
    double alpha = 1.0;
    double mu = 0.0;
    double kappa = 1.0;
    double nu = 0.0;
    double beta = 1.0;
    double tail_threshold = 1.0;
    double d_coef = 0.0;
    double delta_exp = 0.0;
    double a = 0.0;

    bool operator==(const ModelParams&) const = default;
};

/// Validated, immutable model description.
class ModelSpec {
public:
    /// Validates and fills the derived fields. Throws InvalidInput.
    explicit ModelSpec(const ModelParams& params);

    static ModelSpec pitchfork(double lambda, double sigma, double alpha);
    static ModelSpec subcritical_pitchfork(double lambda, double sigma, double alpha);
    static ModelSpec saddle_node(double a, double sigma, double alpha);
    /// g(x) = mu x^{1+kappa} near 0, -nu x^{1+beta} in the tails. d/delta default to sigma/alpha.
    static ModelSpec general_power(double lambda, double sigma, double alpha, double mu, double kappa,
                                   double nu, double beta, double tail_threshold);

    const ModelParams& params() const noexcept { return p_; }
    ModelKind kind() const noexcept { return p_.kind; }
    double lambda() const noexcept { return p_.lambda; }
    double sigma() const noexcept { return p_.sigma; }
    double alpha() const noexcept { return p_.alpha; }
    double mu() const noexcept { return p_.mu; }
    double kappa() const noexcept { return p_.kappa; }
    double nu() const noexcept { return p_.nu; }
    double beta() const noexcept { return p_.beta; }
    double tail_threshold() const noexcept { return p_.tail_threshold; }
    double d_coef() const noexcept { return p_.d_coef; }
    double delta_exp() const noexcept { return p_.delta_exp; }
    double a() const noexcept { return p_.a; }

    bool is_pitchfork_family() const noexcept {
        return p_.kind == ModelKind::Pitchfork || p_.kind == ModelKind::SubcriticalPitchfork;
    }
    bool has_singular_point_at_zero() const noexcept { return p_.kind != ModelKind::SaddleNode; }

    bool operator==(const ModelSpec&) const = default;

private:
    ModelParams p_;
};

/// sign(x) |x|^a, exactly 0 at x = 0. Requires a > 0.
double signed_power(double x, double a);

double drift_eval(const ModelSpec& model, double x);
double diffusion_eval(const ModelSpec& model, double x);

/// Points where drift and diffusion both vanish, in increasing order.
std::vector<double> singular_points(const ModelSpec& model);

enum class Verdict { Satisfied, Violated, NotCheckable };

std::string_view to_string(Verdict v);

struct AssumptionCheck {
    Verdict verdict = Verdict::NotCheckable;
    std::string witness;
};

/// Verdicts for H1..H6 (index 0..5).
struct AssumptionReport {
    std::array<AssumptionCheck, 6> h;

    const AssumptionCheck& operator[](int one_based) const { return h.at(one_based - 1); }
    bool all_satisfied() const;
    bool satisfied(int one_based) const { return (*this)[one_based].verdict == Verdict::Satisfied; }
};

AssumptionReport check_assumptions(const ModelSpec& model);

}  // namespace hsde
