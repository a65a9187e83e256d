#ifndef MANCALA_FLOW_ERRORS_HPP
#define MANCALA_FLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mancala_flow {

// Input outside the admissible class (negative datum, bad ordering, t < 0, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Datum with a zero block length handed to the positive-datum solver.
struct vanishing_data_error : domain_error {
  using domain_error::domain_error;
};

// Quantity that is infinite for the given datum (infinite mass, unbounded slice).
struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal invariant broken; exact results would be wrong.
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Discrete grid too narrow for the requested evolution.
struct overflow_error : std::overflow_error {
  using std::overflow_error::overflow_error;
};

// Malformed string, JSON document or CLI configuration.
struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_ERRORS_HPP
