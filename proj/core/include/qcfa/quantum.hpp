#pragma once

// Superoperators over a real quantum register: operation elements, the
// completeness check sum E^T E = I, branch application and completion of
// partial operator sets.

#include "qcfa/angle.hpp"
#include "qcfa/errors.hpp"
#include "qcfa/linalg.hpp"
#include "qcfa/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcfa {

/// Real amplitudes. An unnormalized vector carries the weight of the branch
/// that produced it: its squared norm is that branch's probability.
struct AmplitudeVector {
  std::vector<Scalar> entries;
  bool normalized = false;

  std::size_t size() const { return entries.size(); }
  Scalar squared_norm() const;
  AmplitudeVector normalized_copy() const;

  static AmplitudeVector basis(std::size_t dim, std::size_t index);
  /// Normalizes `entries` and sets the flag.
  static AmplitudeVector unit(std::vector<Scalar> entries);
};

/// E = sqrt(scale_squared) * matrix with every quantity rational. Lets
/// probabilities be computed exactly when a whole run uses such elements.
struct ExactForm {
  Rational scale_squared;
  RationalMatrix matrix;
};

class OperationElement {
 public:
  OperationElement(std::string label, Matrix matrix);

  static OperationElement exact(std::string label, const Rational& scale_squared, RationalMatrix matrix);
  /// 2x2 rotation [[cos, -sin], [sin, cos]] kept in closed form.
  static OperationElement rotation(std::string label, const SymbolicAngle& angle);

  const std::string& label() const { return label_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return matrix_.rows(); }
  const std::optional<ExactForm>& exact_form() const { return exact_; }
  const std::optional<SymbolicAngle>& rotation_angle() const { return rotation_; }
  /// Set when the element is s*I; its outcome probability is s^2 for every state.
  const std::optional<Scalar>& identity_scale() const { return identity_scale_; }

 private:
  void detect_identity_scale();

  std::string label_;
  Matrix matrix_;
  std::optional<ExactForm> exact_;
  std::optional<SymbolicAngle> rotation_;
  std::optional<Scalar> identity_scale_;
};

class Superoperator {
 public:
  /// Throws StructuralError on empty sets, non-square or mismatched matrices,
  /// or duplicate outcome labels.
  Superoperator(std::string name, std::vector<OperationElement> elements);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<OperationElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  /// Index of the element with `label`, or npos.
  std::size_t find(const std::string& label) const;

  /// Single rotation element: the register update can be deferred.
  bool is_rotation() const;
  /// Every element is a multiple of the identity: outcomes never touch the state.
  bool acts_trivially() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::string name_;
  std::size_t dimension_ = 0;
  std::vector<OperationElement> elements_;
};

struct ValidationReport {
  bool pass = false;
  Scalar residual_norm;  // max |(sum E^T E - I)_ij|
  Matrix residual;       // sum E^T E - I
  Scalar tolerance;
};

ValidationReport validate_superoperator(const Superoperator& op, const Scalar& tol);
ValidationReport validate_superoperator(const Superoperator& op);

/// E * v, unnormalized.
AmplitudeVector apply_element(const OperationElement& e, const AmplitudeVector& v);

struct Outcome {
  std::string label;
  std::size_t index = 0;
  Scalar probability;
  AmplitudeVector post_state;  // normalized
};

/// Outcomes with nonzero probability. Throws ContractError for an
/// unnormalized input.
std::vector<Outcome> outcome_distribution(const Superoperator& op, const AmplitudeVector& v);

OperationElement rotation(const Scalar& radians, std::string label = "rotate");

/// Appends one element sqrt(R), R = I - sum E^T E, labelled `restart_label`.
/// Nothing is appended when R vanishes. Throws CoefficientError when R has an
/// eigenvalue below -tol.
Superoperator complete_superoperator(std::string name, std::vector<OperationElement> partial,
                                     const std::string& restart_label);
Superoperator complete_superoperator(std::string name, std::vector<OperationElement> partial,
                                     const std::string& restart_label, const Scalar& tol);

/// Gram sum sum E^T E of a set of elements.
Matrix gram_sum(const std::vector<OperationElement>& elements, std::size_t dim);

// Frequently used operators.
Superoperator identity_operator(std::size_t dim, std::string name = "id");
Superoperator rotation_operator(const SymbolicAngle& angle, std::string name);
/// Two outcomes "heads"/"tails", each (1/sqrt 2) I.
Superoperator fair_coin(std::size_t dim, std::string name = "coin");
/// Projective measurement in the computational basis; outcomes "q0", "q1", ...
Superoperator basis_measurement(std::size_t dim, std::string name = "measure");
/// Elements target * e_k^T: every outcome leaves the register in `target`.
/// `target` entries are given exactly as (scale_squared, rational column).
Superoperator preparation(const Rational& scale_squared, const std::vector<Rational>& target,
                          const std::vector<std::string>& labels, std::string name);

/// A register whose pending rotation has not been multiplied in yet.
struct QuantumRegister {
  AmplitudeVector state;  // normalized
  SymbolicAngle pending;

  /// State with any pending rotation applied.
  AmplitudeVector resolved() const;
  friend bool operator==(const QuantumRegister& a, const QuantumRegister& b);
};

struct Branch {
  std::size_t outcome = 0;
  Scalar probability;
  QuantumRegister post;
};

/// outcome_distribution on a QuantumRegister, deferring rotations and
/// skipping arithmetic for operators that act trivially.
std::vector<Branch> branch(const Superoperator& op, const QuantumRegister& reg);

}  // namespace qcfa
