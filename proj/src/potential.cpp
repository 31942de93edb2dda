#include "cbary/potential.hpp"

#include <cmath>

namespace cbary {

namespace {

struct VecAcc {
  Eigen::VectorXd v;
  VecAcc& operator+=(const VecAcc& o) {
    v += o.v;
    return *this;
  }
};

struct CVecAcc {
  Eigen::VectorXcd v;
  CVecAcc& operator+=(const CVecAcc& o) {
    v += o.v;
    return *this;
  }
};

// mass * I - sum_i w_i K(W_i), stored as the weighted scalar and matrix sums.
struct LinAcc {
  Eigen::VectorXd r;
  Eigen::MatrixXd k;
  double diag = 0.0;
  LinAcc& operator+=(const LinAcc& o) {
    r += o.r;
    k += o.k;
    diag += o.diag;
    return *this;
  }
};

}  // namespace

double potential_conformal(const RealPoint& x, const RealMeasure& mu, Exec exec) {
  require_same_dim(x.dim(), mu.dim(), "potential_conformal");
  const auto& y = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXd& xc = x.coords();
  const double omx = 1.0 - x.norm_squared();
  return chunked_reduce<double>(
      mu.size(), [] { return 0.0; },
      [&](double& acc, Index b, Index e) {
        for (Index i = b; i < e; ++i) {
          const double r = raw::rho(xc, y.col(i));
          acc -= w[i] * std::log(omx * (1.0 - y.col(i).squaredNorm()) / r);
        }
      },
      exec);
}

double potential_holomorphic(const ComplexPoint& z, const ComplexMeasure& mu, Exec exec) {
  require_same_dim(z.dim(), mu.dim(), "potential_holomorphic");
  const auto& p = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXcd& zc = z.coords();
  const double omz = 1.0 - z.norm_squared();
  return chunked_reduce<double>(
      mu.size(), [] { return 0.0; },
      [&](double& acc, Index b, Index e) {
        for (Index i = b; i < e; ++i) {
          const cdouble zw = p.col(i).dot(zc);  // <z, w_i>
          acc -= w[i] * std::log(omz * (1.0 - p.col(i).squaredNorm()) / std::norm(1.0 - zw));
        }
      },
      exec);
}

double potential_conformal_logcosh(const RealPoint& x, const RealMeasure& mu) {
  require_same_dim(x.dim(), mu.dim(), "potential_conformal_logcosh");
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    acc += mu.weights()[i] * 2.0 * std::log(std::cosh(poincare_distance(x, mu.atom(i))));
  }
  return acc;
}

double potential_holomorphic_logcosh(const ComplexPoint& z, const ComplexMeasure& mu) {
  require_same_dim(z.dim(), mu.dim(), "potential_holomorphic_logcosh");
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    acc += mu.weights()[i] * 2.0 * std::log(std::cosh(bergman_distance(z, mu.atom(i))));
  }
  return acc;
}

Eigen::VectorXd grad_conformal(const RealPoint& x, const RealMeasure& mu, Exec exec) {
  require_same_dim(x.dim(), mu.dim(), "grad_conformal");
  const Index n = mu.dim();
  const auto& y = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXd& xc = x.coords();
  const Eigen::VectorXd radial = (2.0 / (1.0 - x.norm_squared())) * xc;
  return chunked_reduce<VecAcc>(
             mu.size(), [n] { return VecAcc{Eigen::VectorXd::Zero(n)}; },
             [&](VecAcc& acc, Index b, Index e) {
               for (Index i = b; i < e; ++i) {
                 const double y2 = y.col(i).squaredNorm();
                 const double r = raw::rho(xc, y.col(i));
                 acc.v.noalias() += w[i] * (radial + (2.0 * y2 / r) * xc - (2.0 / r) * y.col(i));
               }
             },
             exec)
      .v;
}

Eigen::VectorXd grad_holomorphic(const ComplexPoint& z, const ComplexMeasure& mu, Exec exec) {
  require_same_dim(z.dim(), mu.dim(), "grad_holomorphic");
  const Index m = mu.dim();
  const auto& p = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXcd& zc = z.coords();
  const Eigen::VectorXcd radial = (2.0 / (1.0 - z.norm_squared())) * zc;
  const Eigen::VectorXcd g =
      chunked_reduce<CVecAcc>(
          mu.size(), [m] { return CVecAcc{Eigen::VectorXcd::Zero(m)}; },
          [&](CVecAcc& acc, Index b, Index e) {
            for (Index i = b; i < e; ++i) {
              const cdouble wz = zc.dot(p.col(i));  // <w_i, z>
              acc.v.noalias() += w[i] * (radial - (2.0 / (1.0 - wz)) * p.col(i));
            }
          },
          exec)
          .v;
  return to_real(g);
}

Eigen::VectorXd residual_conformal(const RealPoint& c, const RealMeasure& mu, Exec exec) {
  require_same_dim(c.dim(), mu.dim(), "residual_conformal");
  const Index n = mu.dim();
  const auto& y = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXd& cc = c.coords();
  return chunked_reduce<VecAcc>(
             mu.size(), [n] { return VecAcc{Eigen::VectorXd::Zero(n)}; },
             [&](VecAcc& acc, Index b, Index e) {
               for (Index i = b; i < e; ++i) {
                 double alpha = 0.0, beta = 0.0;
                 raw::mobius_coefficients(cc, y.col(i), alpha, beta);
                 acc.v.noalias() += (w[i] * alpha) * cc - (w[i] * beta) * y.col(i);
               }
             },
             exec)
      .v;
}

Eigen::VectorXcd residual_holomorphic(const ComplexPoint& c, const ComplexMeasure& mu, Exec exec) {
  require_same_dim(c.dim(), mu.dim(), "residual_holomorphic");
  const Index m = mu.dim();
  const auto& p = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXcd& cc = c.coords();
  return chunked_reduce<CVecAcc>(
             mu.size(), [m] { return CVecAcc{Eigen::VectorXcd::Zero(m)}; },
             [&](CVecAcc& acc, Index b, Index e) {
               Eigen::VectorXcd tmp(m);
               for (Index i = b; i < e; ++i) {
                 raw::bergman_automorphism(cc, p.col(i), tmp);
                 acc.v.noalias() += w[i] * tmp;
               }
             },
             exec)
      .v;
}

// In the recentred frame the atoms are W_i = h_c(y_i), and
//   d/db h_b(W)|_{b=0} = (1+|W|^2) I - 2 W W^T.
LinearizedResidual linearize_conformal(const RealPoint& c, const RealMeasure& mu, Exec exec) {
  require_same_dim(c.dim(), mu.dim(), "linearize_conformal");
  const Index n = mu.dim();
  const auto& y = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXd& cc = c.coords();
  LinAcc acc = chunked_reduce<LinAcc>(
      mu.size(),
      [n] { return LinAcc{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n), 0.0}; },
      [&](LinAcc& a, Index b, Index e) {
        Eigen::VectorXd W(n);
        for (Index i = b; i < e; ++i) {
          raw::mobius_map(cc, y.col(i), W);
          a.r.noalias() += w[i] * W;
          a.diag += w[i] * (1.0 + W.squaredNorm());
          a.k.noalias() += (2.0 * w[i]) * W * W.transpose();
        }
      },
      exec);
  LinearizedResidual out;
  out.residual = std::move(acc.r);
  out.jacobian = acc.diag * Eigen::MatrixXd::Identity(n, n) - acc.k;
  return out;
}

// Linear part of b -> p_b(W) at b = 0 is b - W <W, b>, which is only
// R-linear. With v_j = W_j W, its real matrix has columns
//   e_{2j}   - flat(v_j)        (b = e_j)
//   e_{2j+1} - flat(-i v_j)     (b = i e_j).
LinearizedResidual linearize_holomorphic(const ComplexPoint& c, const ComplexMeasure& mu,
                                         Exec exec) {
  require_same_dim(c.dim(), mu.dim(), "linearize_holomorphic");
  const Index m = mu.dim();
  const Index d = 2 * m;
  const auto& p = mu.points();
  const auto& w = mu.weights();
  const Eigen::VectorXcd& cc = c.coords();
  LinAcc acc = chunked_reduce<LinAcc>(
      mu.size(),
      [d] { return LinAcc{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d), 0.0}; },
      [&](LinAcc& a, Index b, Index e) {
        Eigen::VectorXcd W(m);
        for (Index i = b; i < e; ++i) {
          raw::bergman_automorphism(cc, p.col(i), W);
          a.diag += w[i];
          for (Index k = 0; k < m; ++k) {
            a.r[2 * k] += w[i] * W[k].real();
            a.r[2 * k + 1] += w[i] * W[k].imag();
          }
          for (Index j = 0; j < m; ++j) {
            const cdouble wj = w[i] * W[j];
            for (Index k = 0; k < m; ++k) {
              const cdouble v = W[k] * wj;          // column for b = e_j
              const cdouble iv = cdouble(0, -1) * v;  // column for b = i e_j
              a.k(2 * k, 2 * j) += v.real();
              a.k(2 * k + 1, 2 * j) += v.imag();
              a.k(2 * k, 2 * j + 1) += iv.real();
              a.k(2 * k + 1, 2 * j + 1) += iv.imag();
            }
          }
        }
      },
      exec);
  LinearizedResidual out;
  out.residual = std::move(acc.r);
  out.jacobian = acc.diag * Eigen::MatrixXd::Identity(d, d) - acc.k;
  return out;
}

RealMeasure map_atoms(const RealMeasure& mu, const RealMobius& g) {
  require_same_dim(mu.dim(), g.dim(), "map_atoms");
  Eigen::MatrixXd out(mu.dim(), mu.size());
  for (Index i = 0; i < mu.size(); ++i) out.col(i) = apply_mobius(g, mu.atom(i)).coords();
  return RealMeasure(std::move(out), mu.weights());
}

ComplexMeasure map_atoms(const ComplexMeasure& mu, const ComplexAutomorphism& q) {
  require_same_dim(mu.dim(), q.dim(), "map_atoms");
  Eigen::MatrixXcd out(mu.dim(), mu.size());
  for (Index i = 0; i < mu.size(); ++i) out.col(i) = apply_automorphism(q, mu.atom(i)).coords();
  return ComplexMeasure(std::move(out), mu.weights());
}

}  // namespace cbary
