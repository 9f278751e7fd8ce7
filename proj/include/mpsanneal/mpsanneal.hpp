#pragma once

#include "error.hpp"
#include "random.hpp"
#include "instance.hpp"
#include "instance_io.hpp"
#include "exact.hpp"
#include "schedule.hpp"
#include "spin_dynamics.hpp"
#include "local_hamiltonian.hpp"
#include "svd.hpp"
#include "mps.hpp"
#include "tebd.hpp"
#include "langevin_mps.hpp"
#include "classify.hpp"
#include "engines.hpp"
#include "harness.hpp"
