#pragma once

#include "qcl/harness/experiments.hpp"
#include "qcl/harness/report.hpp"
#include "qcl/harness/stats.hpp"
