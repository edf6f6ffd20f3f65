#pragma once

#include "qpd/eigen.hpp"
#include "qpd/equilibrium.hpp"
#include "qpd/errors.hpp"
#include "qpd/linalg.hpp"
#include "qpd/oracle.hpp"
#include "qpd/payoff_tensor.hpp"
#include "qpd/quantum_core.hpp"
#include "qpd/report.hpp"
#include "qpd/strategy_space.hpp"
#include "qpd/sweep.hpp"
#include "qpd/unitary.hpp"
