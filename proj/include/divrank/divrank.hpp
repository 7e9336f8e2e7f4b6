#pragma once

#include "divrank/model.hpp"
#include "divrank/rank.hpp"
#include "divrank/dual.hpp"
#include "divrank/solver.hpp"
#include "divrank/datagen.hpp"
#include "divrank/io.hpp"
