#include "qcfa/quantum.hpp"

#include <set>
#include <sstream>

namespace qcfa {
namespace {

Matrix rotation_matrix(const Scalar& radians) {
  Matrix m(2, 2);
  Scalar c = cos(radians);
  Scalar s = sin(radians);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return m;
}

}  // namespace

Scalar AmplitudeVector::squared_norm() const {
  Scalar total(0L);
  for (const auto& x : entries) total += square(x);
  return total;
}

AmplitudeVector AmplitudeVector::normalized_copy() const {
  Scalar norm = sqrt(squared_norm());
  if (norm.is_zero()) throw ContractError("cannot normalize the zero vector");
  AmplitudeVector out{entries, true};
  for (auto& x : out.entries) x /= norm;
  return out;
}

AmplitudeVector AmplitudeVector::basis(std::size_t dim, std::size_t index) {
  AmplitudeVector v{std::vector<Scalar>(dim, Scalar(0L)), true};
  v.entries.at(index) = Scalar(1L);
  return v;
}

AmplitudeVector AmplitudeVector::unit(std::vector<Scalar> entries) {
  return AmplitudeVector{std::move(entries), false}.normalized_copy();
}

OperationElement::OperationElement(std::string label, Matrix matrix)
    : label_(std::move(label)), matrix_(std::move(matrix)) {
  if (!matrix_.square() || matrix_.rows() == 0) {
    throw StructuralError("operation element '" + label_ + "' is not a nonempty square matrix");
  }
  detect_identity_scale();
}

OperationElement OperationElement::exact(std::string label, const Rational& scale_squared, RationalMatrix matrix) {
  if (scale_squared < 0) throw StructuralError("negative squared scale for element '" + label + "'");
  Matrix numeric = sqrt(Scalar(scale_squared)) * to_scalar(matrix);
  OperationElement e(std::move(label), std::move(numeric));
  e.exact_ = ExactForm{scale_squared, std::move(matrix)};
  return e;
}

OperationElement OperationElement::rotation(std::string label, const SymbolicAngle& angle) {
  OperationElement e(std::move(label), rotation_matrix(angle.radians()));
  e.rotation_ = angle;
  if (angle.is_identity()) {
    RationalMatrix id = RationalMatrix::identity(2);
    e.exact_ = ExactForm{Rational(1), id};
    e.matrix_ = Matrix::identity(2);
    e.identity_scale_ = Scalar(1L);
  } else {
    e.identity_scale_.reset();
  }
  return e;
}

void OperationElement::detect_identity_scale() {
  const std::size_t n = matrix_.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      if (r != c && !matrix_(r, c).is_zero()) return;
      if (r == c && !(matrix_(r, c) == matrix_(0, 0))) return;
    }
  identity_scale_ = matrix_(0, 0);
}

Superoperator::Superoperator(std::string name, std::vector<OperationElement> elements)
    : name_(std::move(name)), elements_(std::move(elements)) {
  if (elements_.empty()) throw StructuralError("superoperator '" + name_ + "' has no operation elements");
  dimension_ = elements_.front().dimension();
  std::set<std::string> labels;
  for (const auto& e : elements_) {
    if (e.dimension() != dimension_) {
      throw StructuralError("superoperator '" + name_ + "': element '" + e.label() + "' has dimension " +
                            std::to_string(e.dimension()) + ", expected " + std::to_string(dimension_));
    }
    if (!labels.insert(e.label()).second) {
      throw StructuralError("superoperator '" + name_ + "': duplicate outcome label '" + e.label() + "'");
    }
  }
}

std::size_t Superoperator::find(const std::string& label) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].label() == label) return i;
  return npos;
}

bool Superoperator::is_rotation() const {
  return elements_.size() == 1 && elements_.front().rotation_angle().has_value();
}

bool Superoperator::acts_trivially() const {
  for (const auto& e : elements_)
    if (!e.identity_scale()) return false;
  return true;
}

Matrix gram_sum(const std::vector<OperationElement>& elements, std::size_t dim) {
  Matrix sum(dim, dim);
  for (const auto& e : elements) {
    if (e.dimension() != dim) throw StructuralError("element '" + e.label() + "' has the wrong dimension");
    sum = sum + e.matrix().transpose() * e.matrix();
  }
  return sum;
}

ValidationReport validate_superoperator(const Superoperator& op, const Scalar& tol) {
  ValidationReport report;
  report.residual = gram_sum(op.elements(), op.dimension()) - Matrix::identity(op.dimension());
  report.residual_norm = max_abs_entry(report.residual);
  report.tolerance = tol;
  report.pass = report.residual_norm <= tol;
  return report;
}

ValidationReport validate_superoperator(const Superoperator& op) {
  return validate_superoperator(op, precision_tolerance());
}

AmplitudeVector apply_element(const OperationElement& e, const AmplitudeVector& v) {
  if (v.size() != e.dimension()) {
    throw StructuralError("element '" + e.label() + "' has dimension " + std::to_string(e.dimension()) +
                          " but the vector has length " + std::to_string(v.size()));
  }
  return AmplitudeVector{e.matrix().apply(v.entries), false};
}

std::vector<Outcome> outcome_distribution(const Superoperator& op, const AmplitudeVector& v) {
  if (!v.normalized || abs(v.squared_norm() - Scalar(1L)) > precision_tolerance()) {
    throw ContractError("outcome_distribution needs a normalized vector");
  }
  std::vector<Outcome> out;
  for (std::size_t i = 0; i < op.size(); ++i) {
    AmplitudeVector w = apply_element(op.elements()[i], v);
    Scalar p = w.squared_norm();
    if (p.is_zero()) continue;
    out.push_back(Outcome{op.elements()[i].label(), i, p, w.normalized_copy()});
  }
  return out;
}

OperationElement rotation(const Scalar& radians, std::string label) {
  return OperationElement(std::move(label), rotation_matrix(radians));
}

Superoperator complete_superoperator(std::string name, std::vector<OperationElement> partial,
                                     const std::string& restart_label) {
  return complete_superoperator(std::move(name), std::move(partial), restart_label, precision_tolerance());
}

Superoperator complete_superoperator(std::string name, std::vector<OperationElement> partial,
                                     const std::string& restart_label, const Scalar& tol) {
  if (partial.empty()) throw StructuralError("cannot complete an empty operator set");
  const std::size_t dim = partial.front().dimension();
  Matrix residual = Matrix::identity(dim) - gram_sum(partial, dim);
  if (max_abs_entry(residual) <= tol) return Superoperator(std::move(name), std::move(partial));

  SymmetricEigen eig = symmetric_eigen(residual);
  if (eig.values.front() < -tol) {
    std::ostringstream msg;
    msg << "coefficient too large for '" << name << "': residual I - sum E^T E has eigenvalue "
        << eig.values.front().to_string(20) << " < 0";
    throw CoefficientError(msg.str(), eig.values.front().to_double());
  }
  // Symmetric square root; directions with (numerically) zero eigenvalue contribute nothing.
  Matrix root(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (eig.values[k] <= tol) continue;
    Scalar s = sqrt(eig.values[k]);
    for (std::size_t r = 0; r < dim; ++r) {
      if (eig.vectors(r, k).is_zero()) continue;
      Scalar vr = s * eig.vectors(r, k);
      for (std::size_t c = 0; c < dim; ++c) root(r, c) += vr * eig.vectors(c, k);
    }
  }
  partial.emplace_back(restart_label, std::move(root));
  return Superoperator(std::move(name), std::move(partial));
}

Superoperator identity_operator(std::size_t dim, std::string name) {
  return Superoperator(std::move(name), {OperationElement::exact("id", Rational(1), RationalMatrix::identity(dim))});
}

Superoperator rotation_operator(const SymbolicAngle& angle, std::string name) {
  return Superoperator(std::move(name), {OperationElement::rotation("rotate", angle)});
}

Superoperator fair_coin(std::size_t dim, std::string name) {
  Rational half(1, 2);
  return Superoperator(std::move(name), {OperationElement::exact("heads", half, RationalMatrix::identity(dim)),
                                         OperationElement::exact("tails", half, RationalMatrix::identity(dim))});
}

Superoperator basis_measurement(std::size_t dim, std::string name) {
  std::vector<OperationElement> elements;
  for (std::size_t k = 0; k < dim; ++k) {
    RationalMatrix p(dim, dim);
    p(k, k) = 1;
    elements.push_back(OperationElement::exact("q" + std::to_string(k), Rational(1), std::move(p)));
  }
  return Superoperator(std::move(name), std::move(elements));
}

Superoperator preparation(const Rational& scale_squared, const std::vector<Rational>& target,
                          const std::vector<std::string>& labels, std::string name) {
  const std::size_t dim = target.size();
  if (labels.size() != dim) throw StructuralError("preparation needs one label per basis state");
  std::vector<OperationElement> elements;
  for (std::size_t k = 0; k < dim; ++k) {
    RationalMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) m(r, k) = target[r];
    elements.push_back(OperationElement::exact(labels[k], scale_squared, std::move(m)));
  }
  return Superoperator(std::move(name), std::move(elements));
}

AmplitudeVector QuantumRegister::resolved() const {
  if (pending.is_zero() || pending.is_identity()) return state;
  if (state.size() != 2) throw StructuralError("pending rotation on a register of dimension " + std::to_string(state.size()));
  AmplitudeVector out{rotation_matrix(pending.radians()).apply(state.entries), true};
  return out;
}

bool operator==(const QuantumRegister& a, const QuantumRegister& b) {
  return a.pending == b.pending && a.state.entries == b.state.entries;
}

std::vector<Branch> branch(const Superoperator& op, const QuantumRegister& reg) {
  if (op.dimension() != reg.state.size()) {
    throw StructuralError("superoperator '" + op.name() + "' has dimension " + std::to_string(op.dimension()) +
                          " but the register has dimension " + std::to_string(reg.state.size()));
  }
  std::vector<Branch> out;
  if (op.acts_trivially()) {
    for (std::size_t i = 0; i < op.size(); ++i) {
      Scalar p = square(*op.elements()[i].identity_scale());
      if (!p.is_zero()) out.push_back(Branch{i, std::move(p), reg});
    }
    return out;
  }
  if (op.is_rotation()) {
    QuantumRegister post = reg;
    post.pending += *op.elements().front().rotation_angle();
    out.push_back(Branch{0, Scalar(1L), std::move(post)});
    return out;
  }
  AmplitudeVector v = reg.resolved();
  for (std::size_t i = 0; i < op.size(); ++i) {
    std::vector<Scalar> w = op.elements()[i].matrix().apply(v.entries);
    Scalar p(0L);
    for (const auto& x : w) p += square(x);
    if (p.is_zero()) continue;
    Scalar norm = sqrt(p);
    for (auto& x : w) x /= norm;
    out.push_back(Branch{i, std::move(p), QuantumRegister{AmplitudeVector{std::move(w), true}, {}}});
  }
  return out;
}

}  // namespace qcfa
