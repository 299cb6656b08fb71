#pragma once

#include "core_arith.hpp"
#include "divisors.hpp"
#include "detect.hpp"
#include "families.hpp"
#include "search.hpp"
#include "emit.hpp"
#include "verify.hpp"
