#include "sgdab/dro.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "sgdab/dual_ascent.hpp"
#include "sgdab/rng.hpp"

namespace sgdab {

namespace {

// ln(1 + exp(-b z)), stable for large |z|.
double logistic_loss(double b, double z) {
  double t = -b * z;
  if (t > 35.0) return t;
  return std::log1p(std::exp(t));
}

// d/dz ln(1 + exp(-b z)) = -b / (1 + exp(b z)), stable.
double logistic_loss_deriv(double b, double z) {
  double t = b * z;
  if (t > 35.0) return -b * std::exp(-t);
  return -b / (1.0 + std::exp(t));
}

double score_one(const Eigen::MatrixXd& a, const ScoreModel& model,
                 const BlockVector& x, Eigen::Index i) {
  const Eigen::Index d = a.cols();
  if (model.kind == ScoreModel::Kind::Linear) {
    const Eigen::VectorXd& w = x.block(0);
    return w.head(d).dot(a.row(i)) + w[d];
  }
  const int h = model.hidden;
  const Eigen::VectorXd& b0 = x.block(0);  // [vec(W1) row-major; b1]
  const Eigen::VectorXd& b1 = x.block(1);  // [w2; b2]
  double out = b1[h];
  for (int j = 0; j < h; ++j) {
    double z = b0[h * d + j];  // bias of hidden unit j
    z += b0.segment(j * d, d).dot(a.row(i));
    out += b1[j] * std::tanh(z);
  }
  return out;
}

struct DroData {
  Eigen::MatrixXd a;    // n x d
  Eigen::VectorXd b;    // labels
  ScoreModel model;
  double mu_reg;
  Eigen::VectorXd y_anchor;  // 1/n

  Eigen::Index n() const { return a.rows(); }
  Eigen::Index d() const { return a.cols(); }

  double score(const BlockVector& x, Eigen::Index i) const {
    return score_one(a, model, x, i);
  }

  // d q(a_i; x) / d x_block, accumulated into grad with coefficient c.
  void accumulate_score_grad(const BlockVector& x, Eigen::Index i, int block,
                             double c, Eigen::VectorXd& grad) const {
    if (model.kind == ScoreModel::Kind::Linear) {
      grad.head(d()) += c * a.row(i).transpose();
      grad[d()] += c;
      return;
    }
    const int h = model.hidden;
    const Eigen::VectorXd& b0 = x.block(0);
    const Eigen::VectorXd& b1 = x.block(1);
    if (block == 1) {
      for (int j = 0; j < h; ++j) {
        double z = b0[h * d() + j] + b0.segment(j * d(), d()).dot(a.row(i));
        grad[j] += c * std::tanh(z);
      }
      grad[h] += c;
      return;
    }
    for (int j = 0; j < h; ++j) {
      double z = b0[h * d() + j] + b0.segment(j * d(), d()).dot(a.row(i));
      double t = std::tanh(z);
      double back = c * b1[j] * (1.0 - t * t);
      grad.segment(j * d(), d()) += back * a.row(i).transpose();
      grad[h * d() + j] += back;
    }
  }
};

}  // namespace

Dataset make_synthetic_blobs(int n_data, int d, std::uint64_t seed) {
  if (n_data < 2 || d < 1)
    throw std::invalid_argument("make_synthetic_blobs: bad shape");
  RngStream rng(seed, 0xb10b);
  Eigen::VectorXd center(d);
  for (int j = 0; j < d; ++j) center[j] = rng.next_double() - 0.5;
  center *= 1.5 / center.norm();

  Dataset data;
  data.features.resize(n_data, d);
  data.labels.resize(n_data);
  for (int i = 0; i < n_data; ++i) {
    double lab = (i < n_data / 2) ? 1.0 : -1.0;
    data.labels[i] = lab;
    for (int j = 0; j < d; ++j)
      data.features(i, j) = lab * center[j] + rng.next_normal();
  }
  return data;
}

DroInstance make_dro(Dataset dataset, double mu_reg, ScoreModel model) {
  const Eigen::Index n = dataset.features.rows();
  const Eigen::Index d = dataset.features.cols();
  if (n == 0 || d == 0) throw std::invalid_argument("make_dro: empty dataset");
  if (dataset.labels.size() != n)
    throw std::invalid_argument("make_dro: labels/features shape mismatch");
  if (mu_reg < 0.0) throw std::invalid_argument("make_dro: mu_reg < 0");

  auto data = std::make_shared<DroData>();
  data->a = dataset.features;
  data->b = dataset.labels;
  data->model = model;
  data->mu_reg = mu_reg;
  data->y_anchor =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));

  MinimaxProblem p;
  if (model.kind == ScoreModel::Kind::Linear) {
    p.num_blocks = 1;
    p.dims_x = {static_cast<int>(d) + 1};
  } else {
    p.num_blocks = 2;
    p.dims_x = {model.hidden * static_cast<int>(d) + model.hidden,
                model.hidden + 1};
  }
  p.dim_y = static_cast<int>(n);
  p.prox_g.assign(p.num_blocks, ProxMap::zero());
  p.prox_h = ProxMap::simplex_with_quadratic(mu_reg, data->y_anchor);
  p.mu = mu_reg;
  p.F_bar = 0.0;

  p.grad_x_block = [data](const BlockVector& x, const Eigen::VectorXd& y,
                          int block) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.block(block).size());
    for (Eigen::Index i = 0; i < data->n(); ++i) {
      double q = data->score(x, i);
      double c = y[i] * logistic_loss_deriv(data->b[i], q);
      if (c != 0.0) data->accumulate_score_grad(x, i, block, c, g);
    }
    return g;
  };
  p.grad_y = [data](const BlockVector& x,
                    const Eigen::VectorXd&) -> Eigen::VectorXd {
    Eigen::VectorXd g(data->n());
    for (Eigen::Index i = 0; i < data->n(); ++i)
      g[i] = logistic_loss(data->b[i], data->score(x, i));
    return g;
  };
  p.eval_L = [data](const BlockVector& x, const Eigen::VectorXd& y) -> double {
    double v = 0.0;
    for (Eigen::Index i = 0; i < data->n(); ++i)
      v += y[i] * logistic_loss(data->b[i], data->score(x, i));
    v -= 0.5 * data->mu_reg * (y - data->y_anchor).squaredNorm();
    return v;
  };

  // Minibatch oracles: M indices uniform with replacement.  The x-estimate is
  // n * mean of per-sample contributions; the y-estimate fills the sampled
  // coordinates scaled by n/M.  Both are unbiased for the full gradients.
  p.stoch_grad_x_block = [data](const BlockVector& x, const Eigen::VectorXd& y,
                                int block, int batch,
                                RngStream& rng) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.block(block).size());
    double scale =
        static_cast<double>(data->n()) / static_cast<double>(batch);
    for (int j = 0; j < batch; ++j) {
      Eigen::Index i = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(data->n())));
      double q = data->score(x, i);
      double c = scale * y[i] * logistic_loss_deriv(data->b[i], q);
      if (c != 0.0) data->accumulate_score_grad(x, i, block, c, g);
    }
    return g;
  };
  p.stoch_grad_y = [data](const BlockVector& x, const Eigen::VectorXd&,
                          int batch, RngStream& rng) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(data->n());
    double scale =
        static_cast<double>(data->n()) / static_cast<double>(batch);
    for (int j = 0; j < batch; ++j) {
      Eigen::Index i = static_cast<Eigen::Index>(
          rng.next_below(static_cast<std::uint64_t>(data->n())));
      g[i] += scale * logistic_loss(data->b[i], data->score(x, i));
    }
    return g;
  };

  Diagnostics diag;
  diag.train_error = [data](const BlockVector& x) -> double {
    Eigen::Index wrong = 0;
    for (Eigen::Index i = 0; i < data->n(); ++i) {
      double pred = (data->score(x, i) >= 0.0) ? 1.0 : -1.0;
      if (pred != data->b[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data->n());
  };
  if (mu_reg > 0.0) {
    auto grad_y_fn = p.grad_y;
    auto eval_fn = p.eval_L;
    ProxMap h = p.prox_h;
    int ny = p.dim_y;
    diag.primal_value = [grad_y_fn, eval_fn, h, ny,
                         mu_reg](const BlockVector& x) -> double {
      auto g = [&](const Eigen::VectorXd& y) { return grad_y_fn(x, y); };
      std::function<double(const Eigen::VectorXd&)> v =
          [&](const Eigen::VectorXd& y) {
            return eval_fn(x, y) + prox_value(h, y);
          };
      DualAscentResult r = maximize_strongly_concave(
          h, g, v, Eigen::VectorXd::Constant(ny, 1.0 / ny), mu_reg, 1e-8,
          200000);
      return eval_fn(x, r.y);
    };
  }
  p.diagnostics = diag;

  DroInstance inst;
  inst.problem = std::move(p);
  inst.data = std::move(dataset);
  inst.model = model;
  inst.mu_reg = mu_reg;
  return inst;
}

Eigen::VectorXd DroInstance::scores(const BlockVector& x) const {
  Eigen::VectorXd q(data.features.rows());
  for (Eigen::Index i = 0; i < q.size(); ++i)
    q[i] = score_one(data.features, model, x, i);
  return q;
}

double DroInstance::train_error(const BlockVector& x) const {
  Eigen::VectorXd q = scores(x);
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    double pred = (q[i] >= 0.0) ? 1.0 : -1.0;
    if (pred != data.labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(q.size());
}

double DroInstance::primal_value(const BlockVector& x, double tol) const {
  if (mu_reg <= 0.0)
    throw std::invalid_argument("DroInstance::primal_value: needs mu_reg > 0");
  auto grad = [&](const Eigen::VectorXd& y) { return problem.grad_y(x, y); };
  auto fval = [&](const Eigen::VectorXd& y) {
    return problem.eval_L(x, y) + prox_value(problem.prox_h, y);
  };
  Eigen::VectorXd y0 =
      Eigen::VectorXd::Constant(problem.dim_y, 1.0 / problem.dim_y);
  DualAscentResult res = maximize_strongly_concave(
      problem.prox_h, grad, fval, y0, mu_reg, tol, 200000);
  return problem.eval_L(x, res.y);
}

BlockVector DroInstance::zero_x() const {
  return BlockVector::zero(problem.dims_x);
}

BlockVector DroInstance::random_x(std::uint64_t seed) const {
  RngStream rng(seed, 0x1417);
  std::vector<Eigen::VectorXd> blocks;
  const Eigen::Index d = data.features.cols();
  if (model.kind == ScoreModel::Kind::Linear) {
    double sd = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::VectorXd w = rng.normal_vector(d + 1, sd);
    w[d] = 0.0;
    blocks.push_back(w);
  } else {
    const int h = model.hidden;
    double sd1 = std::sqrt(2.0 / static_cast<double>(d + h));
    Eigen::VectorXd b0 = rng.normal_vector(h * d + h, sd1);
    b0.tail(h).setZero();
    double sd2 = std::sqrt(2.0 / static_cast<double>(h + 1));
    Eigen::VectorXd b1 = rng.normal_vector(h + 1, sd2);
    b1[h] = 0.0;
    blocks.push_back(b0);
    blocks.push_back(b1);
  }
  return BlockVector(std::move(blocks));
}

}  // namespace sgdab
