#pragma once

#include "qcl/oracles/distribution.hpp"
#include "qcl/oracles/function_table.hpp"
#include "qcl/oracles/hybrid.hpp"
