#pragma once

#include "kappamax/agreement.hpp"
#include "kappamax/anneal.hpp"
#include "kappamax/dims.hpp"
#include "kappamax/errors.hpp"
#include "kappamax/fiber.hpp"
#include "kappamax/io.hpp"
#include "kappamax/markov.hpp"
#include "kappamax/move.hpp"
#include "kappamax/rng.hpp"
#include "kappamax/simstudy.hpp"
#include "kappamax/table.hpp"
#include "kappamax/weights.hpp"
