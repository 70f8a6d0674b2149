#include "direct_lu.hpp"

#include <string>

#include "savns/errors.hpp"

#ifdef SAVNS_HAVE_UMFPACK
#include <umfpack.h>
#else
#include <Eigen/SparseLU>
#endif

namespace savns::detail {

#ifdef SAVNS_HAVE_UMFPACK
// UMFPACK's own refinement steps are off; callers refine against the exact
// residual when they need to.
struct DirectLU::Impl {
  const SpMat* a = nullptr;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];

  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
  }

  void factor(const SpMat& m) {
    a = &m;
    umfpack_di_defaults(control);
    control[UMFPACK_IRSTEP] = 0;
    control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
    void* symbolic = nullptr;
    const int n = static_cast<int>(m.rows());
    int status = umfpack_di_symbolic(n, n, m.outerIndexPtr(), m.innerIndexPtr(),
                                     m.valuePtr(), &symbolic, control, nullptr);
    if (status == UMFPACK_OK)
      status = umfpack_di_numeric(m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(),
                                  symbolic, &numeric, control, nullptr);
    umfpack_di_free_symbolic(&symbolic);
    if (status != UMFPACK_OK)
      throw SolverError("UMFPACK factorisation failed with status " +
                            std::to_string(status),
                        0.0, 0);
  }

  Vec solve(const Vec& r) const {
    Vec x(r.size());
    double info[UMFPACK_INFO];
    const int status =
        umfpack_di_solve(UMFPACK_A, a->outerIndexPtr(), a->innerIndexPtr(),
                         a->valuePtr(), x.data(), r.data(), numeric, control, info);
    if (status != UMFPACK_OK)
      throw SolverError("UMFPACK solve failed with status " + std::to_string(status),
                        0.0, 0);
    return x;
  }
};
#else
struct DirectLU::Impl {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;

  void factor(const SpMat& m) {
    lu.compute(m);
    if (lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorisation failed: " + lu.lastErrorMessage(),
                        0.0, 0);
  }
  Vec solve(const Vec& r) const { return lu.solve(r); }
};
#endif

DirectLU::DirectLU() : impl_(std::make_unique<Impl>()) {}
DirectLU::~DirectLU() = default;

void DirectLU::factor(const SpMat& a) {
  if (!a.isCompressed()) throw SolverError("DirectLU needs a compressed matrix", 0.0, 0);
  impl_->factor(a);
}

Vec DirectLU::solve(const Vec& r) const { return impl_->solve(r); }

}  // namespace savns::detail
