#pragma once

// Umbrella header: Jensen-gap bounds, f-divergences with bound functionals,
// power-mean divergence measures, and the randomized verification suites
// that certify the inequality chains connecting them.

#include "divbound/cli.hpp"
#include "divbound/csiszar.hpp"
#include "divbound/generators.hpp"
#include "divbound/jensen.hpp"
#include "divbound/means.hpp"
#include "divbound/prob.hpp"
#include "divbound/verify.hpp"
