// Matrix elements of QS convolution cocycles between exponential vectors of
// step functions: the semigroup decomposition route, the exact Guichardet
// iterated-integral route with tail certificates, the matrix-sum kernel
// convolution product, multiplicativity checks, and time reversal.
#pragma once

#include "qlevy/convolution.hpp"
#include "qlevy/schurmann.hpp"

namespace qlevy {

// Right-continuous step function R+ -> C^{n_k} with compact support.
struct StepFunction {
  int n_k = 0;
  std::vector<double> breakpoints;  // 0 = t_0 < t_1 < ... < t_m
  std::vector<Vec> values;          // values[j] on [t_j, t_{j+1}); zero beyond

  static StepFunction zero(int n_k);
  static StepFunction constant(const Vec& c, double until);

  Vec at(double u) const;
  void validate() const;
};

// Exact inner product <f,g> over [0,t) (conjugate-linear in f).
Cx step_inner_product(const StepFunction& f, const StepFunction& g, double t);

// Interval decomposition of [0,t) refined by the breakpoints of f and g.
struct IntervalData {
  std::vector<double> lengths;
  std::vector<Vec> f_values;
  std::vector<Vec> g_values;
};
IntervalData merge_intervals(const StepFunction& f, const StepFunction& g,
                             double t);

StepFunction time_reverse(const StepFunction& f, double t);

// Truncated matrix-sum kernel: levels[n] acts on (C^{1+n_k})^{ox n}.
struct MatrixSumKernel {
  int n_k = 0;
  std::vector<Mat> levels;  // levels[0] is 1 x 1
  double cert_c1 = 0.0;     // growth certificate |F_n| <= c1 c2^n
  double cert_c2 = 0.0;

  int n_max() const { return static_cast<int>(levels.size()) - 1; }
  int hat_dim() const { return n_k + 1; }
  MatrixSumKernel adjoint() const;
};

// A cocycle given through its generator phi : A -> M_{1+n_k}.
struct CocycleSpec {
  StarBialgebra algebra;
  MatrixValuedMap phi;
  int n_k = 0;

  static CocycleSpec from_generator(const StarBialgebra& a,
                                    const MatrixValuedMap& phi);
  static CocycleSpec from_triple(const StarBialgebra& a,
                                 const SchurmannTriple& t);
};

// upsilon_n(a) = phi^{ox n} o Delta_{n-1}(a); flipped reverses the n slots.
Mat upsilon(const CocycleSpec& spec, const Element& x, int n,
            bool flipped = false);

// gamma_{c,d}(a) = <c-hat, phi(a) d-hat> with c-hat = (1, c).
RowVec associated_generator(const CocycleSpec& spec, const Vec& c, const Vec& d);

// <eps(f_{[0,t)}), l_t(a) eps(g_{[0,t)})> via the semigroup decomposition.
Cx evaluate_semigroup_decomposition(const CocycleSpec& spec, const Element& x,
                                    const StepFunction& f,
                                    const StepFunction& g, double t);

// Opposite pairing: interval functionals applied to reversed Sweedler legs.
Cx evaluate_opposite(const CocycleSpec& spec, const Element& x,
                     const StepFunction& f, const StepFunction& g, double t);

struct GuichardetValue {
  Cx value;
  double tail_bound = 0.0;
};
// Exact piecewise-constant evaluation of the iterated-integral series of F
// against exponential vectors, truncated at the kernel's stored levels (or
// n_max if smaller); the remainder is controlled by the growth certificate.
GuichardetValue evaluate_guichardet(const MatrixSumKernel& f_kernel,
                                    const StepFunction& f,
                                    const StepFunction& g, double t,
                                    int n_max = -1);

MatrixSumKernel kernel_from_generator(const CocycleSpec& spec, const Element& x,
                                      int n_max);

// Matrix-sum convolution product truncated at level n_max.
MatrixSumKernel kernel_product(const MatrixSumKernel& f,
                               const MatrixSumKernel& g, int n_max);

// upsilon-tilde(ab) = upsilon-tilde(a) * upsilon-tilde(b) on all basis pairs,
// cross-reported with the structure relation of the generator.
Report check_multiplicative(const CocycleSpec& spec, int n_max,
                            double tol = 1e-10);

// <Lambda_t(F) eps(f), Lambda_t(G) eps(g)> = evaluate(F^dag * G, f, g, t).
Cx ito_inner_product(const MatrixSumKernel& f_kernel,
                     const MatrixSumKernel& g_kernel, const StepFunction& f,
                     const StepFunction& g, double t, int n_max);

}  // namespace qlevy
