#pragma once

// Standard normal primitives shared by every model.
//
// The CDF is evaluated through the complementary error function, so the
// lower tail keeps full relative precision. Outputs are clamped to [0, 1].
// All functions throw DomainError on non-finite input.

namespace dynlab {

inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double normal_cdf(double z);
double normal_pdf(double z);

/// Inverse of normal_cdf on (0, 1). A rational initial guess is polished by
/// one Halley step, which brings |normal_cdf(result) - p| below 1e-12.
double normal_quantile(double p);

}  // namespace dynlab
