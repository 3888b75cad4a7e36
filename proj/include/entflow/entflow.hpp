#pragma once

#include "entflow/cache.hpp"
#include "entflow/edsolver.hpp"
#include "entflow/errors.hpp"
#include "entflow/freefermion.hpp"
#include "entflow/model.hpp"
#include "entflow/quadrature.hpp"
#include "entflow/rgscan.hpp"
#include "entflow/spectra.hpp"
