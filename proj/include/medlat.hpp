#pragma once

#include "medlat/error.hpp"
#include "medlat/io.hpp"
#include "medlat/lattice.hpp"
#include "medlat/preorder.hpp"
#include "medlat/report.hpp"
#include "medlat/rules.hpp"
#include "medlat/suites.hpp"
#include "medlat/tree_automaton.hpp"
#include "medlat/verify.hpp"
