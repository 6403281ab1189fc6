#pragma once

#include "qcl/qsim/bht.hpp"
#include "qcl/qsim/bit_drop.hpp"
#include "qcl/qsim/grover.hpp"
#include "qcl/qsim/round_up.hpp"
#include "qcl/qsim/statevector.hpp"
#include "qcl/qsim/subset.hpp"
