#pragma once

// Standard, rotated, intermediate-field and improved evaluators.
#include "cardano.hpp"
#include "if_eval.hpp"
#include "if_matrix.hpp"
#include "improved.hpp"
#include "standard.hpp"
