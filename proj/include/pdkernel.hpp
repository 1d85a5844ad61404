#pragma once

#include "pdkernel/alpha_sweep.hpp"
#include "pdkernel/bloch.hpp"
#include "pdkernel/compare.hpp"
#include "pdkernel/config.hpp"
#include "pdkernel/discrete_kernel.hpp"
#include "pdkernel/errors.hpp"
#include "pdkernel/experiment.hpp"
#include "pdkernel/fem.hpp"
#include "pdkernel/kernel_io.hpp"
#include "pdkernel/microstructure.hpp"
#include "pdkernel/nonlocal_solvers.hpp"
#include "pdkernel/pulse.hpp"
#include "pdkernel/run.hpp"
#include "pdkernel/solver_state.hpp"
#include "pdkernel/spectral.hpp"
