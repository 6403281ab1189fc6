#pragma once

#include "qcl/exact/certify.hpp"
#include "qcl/exact/enumerate.hpp"
#include "qcl/exact/polynomial.hpp"
#include "qcl/exact/rational.hpp"
#include "qcl/exact/tv.hpp"
