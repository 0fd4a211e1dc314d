// Umbrella header.

#pragma once

#include "decomposition.hpp"
#include "distribution.hpp"
#include "examples.hpp"
#include "interaction.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "search.hpp"
