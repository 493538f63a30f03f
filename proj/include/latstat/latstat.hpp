#pragma once

#include "latstat/enumerate.hpp"
#include "latstat/errors.hpp"
#include "latstat/io.hpp"
#include "latstat/lattice.hpp"
#include "latstat/mod_one.hpp"
#include "latstat/rational.hpp"
#include "latstat/series.hpp"
