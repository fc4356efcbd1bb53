#include "wpg/structured_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wpg/error.hpp"

namespace wpg {
namespace {

constexpr double kMinStep = 1e-5;
constexpr double kZeroBeta = 1e-8;

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put(out, static_cast<std::int64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

StructuredSvm::StructuredSvm(int dim, const StructuredSvmParams& params)
    : params_(params), h_(Eigen::VectorXd::Zero(dim)), rng_(params.seed) {
  if (dim < 1) throw Error(ErrorKind::kParameter, "SVM dimension must be positive");
  if (!(params.c > 0.0)) throw Error(ErrorKind::kParameter, "SVM C must be positive");
  if (params.budget < 0) throw Error(ErrorKind::kParameter, "SVM budget must be >= 0");
  const int cap = params.budget > 0 ? params.budget + 2 : 0;
  kernel_ = Eigen::MatrixXd::Zero(cap, cap);
}

void StructuredSvm::update(SupportPattern pattern) {
  if (pattern.x.rows() != dim() || pattern.x.cols() < 2 ||
      static_cast<Eigen::Index>(pattern.loss.size()) != pattern.x.cols() || pattern.label < 0 ||
      pattern.label >= pattern.x.cols()) {
    throw Error(ErrorKind::kInput, "malformed support pattern");
  }
  auto p = std::make_shared<const SupportPattern>(std::move(pattern));
  patterns_.push_back(p);
  process_new(p);
  budget_maintenance();
  for (int i = 0; i < params_.reprocess_steps; ++i) {
    reprocess();
    budget_maintenance();
  }
  refresh_weights();
}

std::vector<StructuredSvm::SupportVectorView> StructuredSvm::support_vectors() const {
  std::vector<SupportVectorView> out;
  out.reserve(svs_.size());
  for (const auto& sv : svs_) out.push_back({column(sv), sv.beta});
  return out;
}

double StructuredSvm::positive_similarity(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& sv : svs_) {
    if (sv.beta <= 0.0) continue;
    const auto s = column(sv);
    const double norm = s.norm();
    if (norm > 0.0) sum += s.dot(x) / norm;
    ++count;
  }
  return count == 0 ? 1.0 : sum / count;
}

double StructuredSvm::kkt_gap() const {
  double gap = 0.0;
  for (const auto& p : patterns_) {
    double max_grad = -std::numeric_limits<double>::infinity();
    for (const auto& sv : svs_) {
      if (sv.pattern == p && sv.beta < bound(sv)) max_grad = std::max(max_grad, sv.grad);
    }
    // Positive candidate with beta == 0 always qualifies.
    max_grad = std::max(max_grad, -p->loss[p->label] - h_.dot(p->x.col(p->label)));
    gap = std::max(gap, max_grad - min_gradient(*p).second);
  }
  return gap;
}

double StructuredSvm::dual_objective() const {
  double d = 0.0;
  for (const auto& sv : svs_) d -= sv.beta * loss(sv);
  return d - 0.5 * h_.squaredNorm();
}

std::pair<int, double> StructuredSvm::min_gradient(const SupportPattern& p) const {
  std::pair<int, double> best(-1, std::numeric_limits<double>::infinity());
  const Eigen::VectorXd scores = p.x.transpose() * h_;
  for (Eigen::Index k = 0; k < p.x.cols(); ++k) {
    const double g = -p.loss[k] - scores(k);
    if (g < best.second) best = {static_cast<int>(k), g};
  }
  return best;
}

int StructuredSvm::add_support_vector(const PatternPtr& p, int y, double grad) {
  const int index = static_cast<int>(svs_.size());
  svs_.push_back({p, y, 0.0, grad});
  if (kernel_.rows() <= index) {
    const Eigen::Index grow = std::max<Eigen::Index>(2 * kernel_.rows(), index + 1);
    kernel_.conservativeResize(grow, grow);
  }
  const auto x = p->x.col(y);
  for (int i = 0; i < index; ++i) {
    kernel_(i, index) = kernel_(index, i) = column(svs_[i]).dot(x);
  }
  kernel_(index, index) = x.squaredNorm();
  return index;
}

void StructuredSvm::remove_support_vector(int index) {
  const PatternPtr p = svs_[index].pattern;
  const int last = static_cast<int>(svs_.size()) - 1;
  if (index < last) {
    std::swap(svs_[index], svs_[last]);
    kernel_.row(index).head(last + 1).swap(kernel_.row(last).head(last + 1));
    kernel_.col(index).head(last + 1).swap(kernel_.col(last).head(last + 1));
  }
  svs_.pop_back();
  const bool referenced = std::any_of(svs_.begin(), svs_.end(), [&](const SupportVector& sv) { return sv.pattern == p; });
  if (!referenced) patterns_.erase(std::find(patterns_.begin(), patterns_.end(), p));
}

void StructuredSvm::smo_step(int ipos, int ineg) {
  if (ipos == ineg) return;
  SupportVector& svp = svs_[ipos];
  SupportVector& svn = svs_[ineg];
  if (svp.grad - svn.grad >= kMinStep) {
    const double kii = kernel_(ipos, ipos) + kernel_(ineg, ineg) - 2.0 * kernel_(ipos, ineg);
    const double lu = kii > 0.0 ? (svp.grad - svn.grad) / kii : std::numeric_limits<double>::infinity();
    const double l = std::min(lu, bound(svp) - svp.beta);
    svp.beta += l;
    svn.beta -= l;
    h_ += l * (column(svp) - column(svn));
    for (std::size_t i = 0; i < svs_.size(); ++i) {
      svs_[i].grad -= l * (kernel_(i, ipos) - kernel_(i, ineg));
    }
  }
  const bool drop_neg = std::abs(svn.beta) < kZeroBeta;
  if (std::abs(svp.beta) < kZeroBeta) {
    remove_support_vector(ipos);
    // The last element was swapped into ipos.
    if (ineg == static_cast<int>(svs_.size())) ineg = ipos;
  }
  if (drop_neg) remove_support_vector(ineg);
}

void StructuredSvm::process_new(const PatternPtr& p) {
  const int ip = add_support_vector(p, p->label, -h_.dot(p->x.col(p->label)));
  const auto [y, grad] = min_gradient(*p);
  const int in = add_support_vector(p, y, grad);
  smo_step(ip, in);
}

std::size_t StructuredSvm::pick_pattern() {
  return std::uniform_int_distribution<std::size_t>(0, patterns_.size() - 1)(rng_);
}

void StructuredSvm::process_old() {
  if (patterns_.empty()) return;
  const PatternPtr p = patterns_[pick_pattern()];
  int ip = -1;
  double max_grad = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < svs_.size(); ++i) {
    const auto& sv = svs_[i];
    if (sv.pattern != p) continue;
    if (sv.grad > max_grad && sv.beta < bound(sv)) {
      ip = static_cast<int>(i);
      max_grad = sv.grad;
    }
  }
  if (ip < 0) return;
  const auto [y, grad] = min_gradient(*p);
  int in = -1;
  for (std::size_t i = 0; i < svs_.size(); ++i) {
    if (svs_[i].pattern == p && svs_[i].y == y) {
      in = static_cast<int>(i);
      break;
    }
  }
  if (in < 0) in = add_support_vector(p, y, grad);
  smo_step(ip, in);
}

void StructuredSvm::optimize() {
  if (patterns_.empty()) return;
  const PatternPtr p = patterns_[pick_pattern()];
  int ip = -1, in = -1;
  double max_grad = -std::numeric_limits<double>::infinity();
  double min_grad = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < svs_.size(); ++i) {
    const auto& sv = svs_[i];
    if (sv.pattern != p) continue;
    if (sv.grad > max_grad && sv.beta < bound(sv)) {
      ip = static_cast<int>(i);
      max_grad = sv.grad;
    }
    if (sv.grad < min_grad) {
      in = static_cast<int>(i);
      min_grad = sv.grad;
    }
  }
  if (ip < 0 || in < 0) return;
  smo_step(ip, in);
}

void StructuredSvm::reprocess() {
  process_old();
  for (int i = 0; i < params_.optimize_steps; ++i) optimize();
}

void StructuredSvm::budget_maintenance() {
  if (params_.budget <= 0) return;
  while (static_cast<int>(svs_.size()) > params_.budget) {
    // Negative vector whose removal perturbs the weight vector least, with
    // its mass moved onto the positive vector of the same pattern.
    double best = std::numeric_limits<double>::infinity();
    int in = -1, ip = -1;
    for (std::size_t i = 0; i < svs_.size(); ++i) {
      if (svs_[i].beta >= 0.0) continue;
      int j = -1;
      for (std::size_t k = 0; k < svs_.size(); ++k) {
        if (svs_[k].beta > 0.0 && svs_[k].pattern == svs_[i].pattern) {
          j = static_cast<int>(k);
          break;
        }
      }
      if (j < 0) continue;
      const double b = svs_[i].beta;
      const double val = b * b * (kernel_(i, i) + kernel_(j, j) - 2.0 * kernel_(i, j));
      if (val < best) {
        best = val;
        in = static_cast<int>(i);
        ip = j;
      }
    }
    if (in < 0) break;
    svs_[ip].beta += svs_[in].beta;
    remove_support_vector(in);
    if (ip == static_cast<int>(svs_.size())) ip = in;
    if (svs_[ip].beta < kZeroBeta) remove_support_vector(ip);
    refresh_weights();
    refresh_gradients();
  }
}

void StructuredSvm::refresh_weights() {
  h_.setZero();
  for (const auto& sv : svs_) h_ += sv.beta * column(sv);
}

void StructuredSvm::refresh_gradients() {
  for (auto& sv : svs_) sv.grad = -loss(sv) - h_.dot(column(sv));
}

void StructuredSvm::serialize(std::ostream& out) const {
  put(out, params_.c);
  put(out, params_.budget);
  put(out, params_.reprocess_steps);
  put(out, params_.optimize_steps);
  put(out, params_.seed);
  put_vector(out, h_);
  put(out, static_cast<std::int64_t>(patterns_.size()));
  for (const auto& p : patterns_) {
    put(out, static_cast<std::int64_t>(p->x.cols()));
    put(out, p->label);
    out.write(reinterpret_cast<const char*>(p->x.data()), static_cast<std::streamsize>(p->x.size() * sizeof(double)));
    for (double l : p->loss) put(out, l);
  }
  put(out, static_cast<std::int64_t>(svs_.size()));
  for (const auto& sv : svs_) {
    const auto it = std::find(patterns_.begin(), patterns_.end(), sv.pattern);
    put(out, static_cast<std::int64_t>(it - patterns_.begin()));
    put(out, sv.y);
    put(out, sv.beta);
    put(out, sv.grad);
  }
  out << rng_;
}

}  // namespace wpg
