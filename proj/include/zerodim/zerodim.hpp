#pragma once

#include "bounds.hpp"
#include "exact_series.hpp"
#include "representations.hpp"
#include "resummation.hpp"
