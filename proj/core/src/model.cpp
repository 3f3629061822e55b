#include "cavsim/model.hpp"

#include <cmath>
#include <sstream>

#include "cavsim/errors.hpp"

namespace cavsim {

namespace {

std::string describe(const char* name, double value) {
    std::ostringstream oss;
    oss << name << "=" << value;
    return oss.str();
}

}  // namespace

void CavityParams::validate() const {
    if (!is_finite(omega) || !is_finite(kappa_i) || !is_finite(kappa_e) || !is_finite(gamma)) {
        throw Error(ErrorCode::NonFiniteInput, "cavity parameters must be finite");
    }
    if (omega <= 0.0) {
        throw Error(ErrorCode::InconsistentParams, "cavity frequency must be positive",
                    describe("omega", omega));
    }
    if (kappa_i < 0.0 || kappa_e < 0.0 || gamma < 0.0) {
        throw Error(ErrorCode::InconsistentParams, "cavity rates must be nonnegative");
    }
}

CouplingSpec CouplingSpec::direct(double g) {
    CouplingSpec spec;
    spec.kind = Kind::Direct;
    spec.g = g;
    spec.validate();
    return spec;
}

CouplingSpec CouplingSpec::cable(double theta, double gamma0_l0) {
    CouplingSpec spec;
    spec.kind = Kind::Cable;
    spec.theta = theta;
    spec.gamma0_l0 = gamma0_l0;
    spec.validate();
    return spec;
}

void CouplingSpec::validate() const {
    if (kind == Kind::Direct) {
        if (!is_finite(g)) {
            throw Error(ErrorCode::NonFiniteInput, "direct coupling strength must be finite");
        }
        if (g < 0.0) {
            throw Error(ErrorCode::InconsistentParams, "direct coupling strength must be nonnegative",
                        describe("g", g));
        }
    } else {
        if (!is_finite(theta) || !is_finite(gamma0_l0)) {
            throw Error(ErrorCode::NonFiniteInput, "cable parameters must be finite");
        }
        if (gamma0_l0 < 0.0) {
            throw Error(ErrorCode::InconsistentParams, "cable attenuation exponent must be nonnegative",
                        describe("gamma0_l0", gamma0_l0));
        }
    }
}

void LinearModel::validate() const {
    if (matrix.rows() < 1 || matrix.rows() != matrix.cols()) {
        throw Error(ErrorCode::InconsistentParams, "model matrix must be square and nonempty");
    }
    if (!matrix.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "model matrix has non-finite entries");
    }
    if (input_couplings.size() != matrix.rows()) {
        throw Error(ErrorCode::InconsistentParams, "input coupling vector size must match mode count");
    }
    if (labels.size() != static_cast<std::size_t>(matrix.rows())) {
        throw Error(ErrorCode::InconsistentParams, "label count must match mode count");
    }
    for (int j = 0; j < dim(); ++j) {
        // allow roundoff at the scale of the entries
        const double tol = 1e-12 * (1.0 + matrix.cwiseAbs().maxCoeff());
        if (matrix(j, j).real() > tol) {
            throw Error(ErrorCode::InconsistentParams,
                        "model diagonal has positive real part (gain)",
                        describe("mode", static_cast<double>(j)));
        }
    }
    if (dim() == 2 && matrix(0, 1) != matrix(1, 0)) {
        throw Error(ErrorCode::InconsistentParams, "two-mode model must have equal off-diagonals");
    }
}

ChainSpec ChainSpec::uniform(int n, double g, double kappa_i, double kappa_e_first,
                             double kappa_e_last, double omega) {
    ChainSpec spec;
    spec.n = n;
    spec.g = g;
    spec.kappa_i.assign(static_cast<std::size_t>(std::max(n, 0)), kappa_i);
    spec.kappa_e_first = kappa_e_first;
    spec.kappa_e_last = kappa_e_last;
    spec.omega = omega;
    spec.validate();
    return spec;
}

ChainSpec ChainSpec::with_size(int n) const {
    ChainSpec spec = *this;
    spec.n = n;
    const double base = kappa_i.empty() ? 0.0 : kappa_i.front();
    spec.kappa_i.assign(static_cast<std::size_t>(std::max(n, 0)), base);
    spec.validate();
    return spec;
}

void ChainSpec::validate() const {
    if (n < 2) {
        throw Error(ErrorCode::ChainSize, "chain needs at least two cavities",
                    describe("n", static_cast<double>(n)));
    }
    if (kappa_i.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::InconsistentParams, "chain kappa_i list must have one entry per cavity");
    }
    if (!is_finite(g) || !is_finite(kappa_e_first) || !is_finite(kappa_e_last) || !is_finite(omega)) {
        throw Error(ErrorCode::NonFiniteInput, "chain parameters must be finite");
    }
    if (g < 0.0 || kappa_e_first < 0.0 || kappa_e_last < 0.0) {
        throw Error(ErrorCode::InconsistentParams, "chain rates must be nonnegative");
    }
    if (omega <= 0.0) {
        throw Error(ErrorCode::InconsistentParams, "chain frequency must be positive");
    }
    for (double k : kappa_i) {
        if (!is_finite(k) || k < 0.0) {
            throw Error(ErrorCode::InconsistentParams, "chain internal rates must be nonnegative");
        }
    }
}

cplx cable_one_way_factor(const CouplingSpec& coupling) {
    const double theta = std::remainder(coupling.theta, two_pi);
    return std::exp(cplx(-0.5 * coupling.gamma0_l0, theta));
}

namespace {

void require_cable(const CouplingSpec& coupling) {
    if (!coupling.is_cable()) {
        throw Error(ErrorCode::VariantMismatch, "operation requires a cable coupling");
    }
    coupling.validate();
}

/// Round-trip denominator 1 - e^{2i*theta - gamma0_l0}; throws near the
/// cable resonance where the reduced model diverges.
cplx cable_denominator(const CouplingSpec& coupling) {
    const cplx u = cable_one_way_factor(coupling);
    const cplx den = 1.0 - u * u;
    if (std::abs(den) < cable_singularity_threshold) {
        std::ostringstream oss;
        oss << "theta=" << coupling.theta << " gamma0_l0=" << coupling.gamma0_l0;
        throw Error(ErrorCode::CableResonanceSingularity,
                    "cable round-trip factor too close to 1 (theta = m*pi with lossless cable)",
                    oss.str());
    }
    return den;
}

}  // namespace

LinearModel build_direct_model(const CavityParams& c1, const CavityParams& c2,
                               const CouplingSpec& coupling, double frame_frequency) {
    c1.validate();
    c2.validate();
    if (!coupling.is_direct()) {
        throw Error(ErrorCode::VariantMismatch, "build_direct_model requires a direct coupling");
    }
    coupling.validate();
    if (c1.gamma != 0.0 || c2.gamma != 0.0) {
        throw Error(ErrorCode::InconsistentParams,
                    "directly coupled cavities must have zero cable rate gamma");
    }
    if (!is_finite(frame_frequency)) {
        throw Error(ErrorCode::NonFiniteInput, "frame frequency must be finite");
    }

    LinearModel model;
    model.matrix.resize(2, 2);
    model.matrix(0, 0) = cplx(-0.5 * c1.kappa(), -(c1.omega - frame_frequency));
    model.matrix(1, 1) = cplx(-0.5 * c2.kappa(), -(c2.omega - frame_frequency));
    model.matrix(0, 1) = cplx(0.0, -coupling.g);
    model.matrix(1, 0) = cplx(0.0, -coupling.g);
    model.input_couplings.resize(2);
    model.input_couplings << std::sqrt(c1.kappa_e), std::sqrt(c2.kappa_e);
    model.frame_frequency = frame_frequency;
    model.labels = {"cavity1", "cavity2"};
    model.validate();
    return model;
}

CableFields eliminate_cable(cplx a1, cplx a2, const CouplingSpec& coupling,
                            double gamma1, double gamma2) {
    require_cable(coupling);
    if (!is_finite(a1) || !is_finite(a2) || !is_finite(gamma1) || !is_finite(gamma2)) {
        throw Error(ErrorCode::NonFiniteInput, "eliminate_cable inputs must be finite");
    }
    if (gamma1 < 0.0 || gamma2 < 0.0) {
        throw Error(ErrorCode::InconsistentParams, "cable coupling rates must be nonnegative");
    }
    const cplx u = cable_one_way_factor(coupling);
    const cplx den = cable_denominator(coupling);

    CableFields fields;
    fields.b1 = (std::sqrt(gamma1) * a1 + u * std::sqrt(gamma2) * a2) / den;
    fields.b2 = (std::sqrt(gamma2) * a2 + u * std::sqrt(gamma1) * a1) / den;
    return fields;
}

EffectiveCoupling effective_coupling(const CavityParams& c1, const CavityParams& c2,
                                     const CouplingSpec& coupling) {
    c1.validate();
    c2.validate();
    require_cable(coupling);
    if (c1.gamma <= 0.0 || c2.gamma <= 0.0) {
        throw Error(ErrorCode::ZeroCoupling,
                    "cable-coupled cavities need positive coupling rates gamma");
    }
    const cplx u = cable_one_way_factor(coupling);
    const cplx den = cable_denominator(coupling);
    const cplx round_trip = u * u;

    EffectiveCoupling eff;
    eff.delta_omega_1 = cplx(0.0, -1.0) * (c1.gamma * round_trip / den);
    eff.delta_omega_2 = cplx(0.0, -1.0) * (c2.gamma * round_trip / den);
    eff.g_eff = cplx(0.0, -1.0) * (std::sqrt(c1.gamma * c2.gamma) * u / den);
    eff.zeta = wrap_two_pi(1.5 * pi + std::arg(eff.g_eff));
    eff.kappa_eff_1 = c1.kappa() - 2.0 * eff.delta_omega_1.imag();
    eff.kappa_eff_2 = c2.kappa() - 2.0 * eff.delta_omega_2.imag();
    return eff;
}

LinearModel build_cable_model(const CavityParams& c1, const CavityParams& c2,
                              const CouplingSpec& coupling, double frame_frequency) {
    const EffectiveCoupling eff = effective_coupling(c1, c2, coupling);
    if (!is_finite(frame_frequency)) {
        throw Error(ErrorCode::NonFiniteInput, "frame frequency must be finite");
    }

    LinearModel model;
    model.matrix.resize(2, 2);
    const cplx detuned_1 = cplx(0.0, -1.0) * (cplx(c1.omega - frame_frequency, 0.0) + eff.delta_omega_1);
    const cplx detuned_2 = cplx(0.0, -1.0) * (cplx(c2.omega - frame_frequency, 0.0) + eff.delta_omega_2);
    model.matrix(0, 0) = detuned_1 - cplx(0.5 * c1.kappa(), 0.0);
    model.matrix(1, 1) = detuned_2 - cplx(0.5 * c2.kappa(), 0.0);
    model.matrix(0, 1) = cplx(0.0, -1.0) * eff.g_eff;
    model.matrix(1, 0) = model.matrix(0, 1);
    model.input_couplings.resize(2);
    model.input_couplings << std::sqrt(c1.kappa_e), std::sqrt(c2.kappa_e);
    model.frame_frequency = frame_frequency;
    model.labels = {"cavity1", "cavity2"};
    model.validate();
    return model;
}

LinearModel build_chain_model(const ChainSpec& spec, double frame_frequency) {
    spec.validate();
    if (!is_finite(frame_frequency)) {
        throw Error(ErrorCode::NonFiniteInput, "frame frequency must be finite");
    }

    const int n = spec.n;
    LinearModel model;
    model.matrix = Eigen::MatrixXcd::Zero(n, n);
    model.input_couplings = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
        double kappa = spec.kappa_i[static_cast<std::size_t>(j)];
        if (j == 0) {
            kappa += spec.kappa_e_first;
        }
        if (j == n - 1) {
            kappa += spec.kappa_e_last;
        }
        model.matrix(j, j) = cplx(-0.5 * kappa, -(spec.omega - frame_frequency));
        if (j + 1 < n) {
            model.matrix(j, j + 1) = cplx(0.0, -spec.g);
            model.matrix(j + 1, j) = cplx(0.0, -spec.g);
        }
        model.labels.push_back("cavity" + std::to_string(j + 1));
    }
    model.input_couplings(0) = std::sqrt(spec.kappa_e_first);
    model.input_couplings(n - 1) = std::sqrt(spec.kappa_e_last);
    model.frame_frequency = frame_frequency;
    model.validate();
    return model;
}

LinearModel single_mode_model(const CavityParams& c, double frame_frequency) {
    c.validate();
    if (c.gamma != 0.0) {
        throw Error(ErrorCode::InconsistentParams, "isolated cavity must have zero cable rate gamma");
    }
    if (!is_finite(frame_frequency)) {
        throw Error(ErrorCode::NonFiniteInput, "frame frequency must be finite");
    }
    LinearModel model;
    model.matrix.resize(1, 1);
    model.matrix(0, 0) = cplx(-0.5 * c.kappa(), -(c.omega - frame_frequency));
    model.input_couplings.resize(1);
    model.input_couplings << std::sqrt(c.kappa_e);
    model.frame_frequency = frame_frequency;
    model.labels = {"cavity1"};
    model.validate();
    return model;
}

}  // namespace cavsim
