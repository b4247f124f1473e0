#pragma once

#include "joincover/bounds.hpp"
#include "joincover/codes.hpp"
#include "joincover/core.hpp"
#include "joincover/cover.hpp"
#include "joincover/decompose.hpp"
#include "joincover/errors.hpp"
#include "joincover/graph.hpp"
#include "joincover/io.hpp"
#include "joincover/lp.hpp"
#include "joincover/pick.hpp"
#include "joincover/rational.hpp"
#include "joincover/rounding.hpp"
