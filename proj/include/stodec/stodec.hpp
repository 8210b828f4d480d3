#pragma once

#include "stodec/channel.hpp"
#include "stodec/codes.hpp"
#include "stodec/errors.hpp"
#include "stodec/graph.hpp"
#include "stodec/graph_io.hpp"
#include "stodec/mass.hpp"
#include "stodec/reference.hpp"
#include "stodec/rng.hpp"
#include "stodec/satisfaction.hpp"
#include "stodec/stochastic.hpp"
#include "stodec/sweep.hpp"
