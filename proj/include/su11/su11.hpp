#pragma once

#include "su11/core_model.hpp"
#include "su11/correlations.hpp"
#include "su11/csv.hpp"
#include "su11/error.hpp"
#include "su11/fock_oracle.hpp"
#include "su11/metrology.hpp"
#include "su11/moments.hpp"
#include "su11/observables.hpp"
#include "su11/sweep.hpp"
#include "su11/verify.hpp"
