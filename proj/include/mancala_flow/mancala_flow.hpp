#ifndef MANCALA_FLOW_HPP
#define MANCALA_FLOW_HPP

#include "check.hpp"
#include "discrete.hpp"
#include "errors.hpp"
#include "fixtures.hpp"
#include "freeboundary.hpp"
#include "lyapunov.hpp"
#include "parallel.hpp"
#include "polygonal.hpp"
#include "rational.hpp"
#include "riemann.hpp"
#include "serialize.hpp"
#include "svg.hpp"
#include "transport.hpp"

#endif  // MANCALA_FLOW_HPP
