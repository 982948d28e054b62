#pragma once

namespace opmeasure {

/// Numerical thresholds shared by every analysis. The defaults are the
/// documented ones; callers may override individual fields.
struct Tolerances {
    /// ‖A − A*‖_F ≤ hermitian · ‖A‖_F
    double hermitian = 1e-12;
    /// λ_min(A) ≥ −psd · ‖A‖_2
    double psd = 1e-12;
    /// singular values σ > rank · max(σ_max, 1) count toward the rank
    double rank = 1e-10;
    /// cell value ‖V‖_F ≤ null · (largest cell value of the measure) is zero
    double null = 1e-12;
    /// (Σ(cell) f, f) > support · ρ(cell) · ‖f‖² puts the cell in Γ(f)
    double support = 1e-12;
    /// ρ(A △ B) < support_equality · ρ(ℝ) identifies two supports
    double support_equality = 1e-12;
    /// |det Ψ_k| > determinant · Π diag(Ψ_k)
    double determinant = 1e-12;
    /// ‖B*B − I‖_max for orthonormal bases and isometries
    double orthonormal = 1e-10;
    /// ‖Σ(ℝ) − I‖_max for POVM inputs
    double povm = 1e-10;
    /// eigenvalues λ > dilation_range · λ_max span ran(A^{1/2})
    double dilation_range = 1e-12;
    /// eigenvalues within eigen_cluster · ‖A‖ form one spectral point
    double eigen_cluster = 1e-9;
    /// per-eigenvalue match when comparing spectra
    double eigenvalue_match = 1e-10;
    /// σ_min > invertible · σ_max
    double invertible = 1e-12;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace opmeasure
