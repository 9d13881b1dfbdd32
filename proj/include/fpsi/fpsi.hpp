#pragma once

#include "fpsi/config.hpp"
#include "fpsi/convergence.hpp"
#include "fpsi/energy.hpp"
#include "fpsi/generators.hpp"
#include "fpsi/mesh_io.hpp"
#include "fpsi/mms.hpp"
#include "fpsi/run.hpp"
#include "fpsi/scenarios.hpp"
#include "fpsi/timestepper.hpp"
#include "fpsi/vtk.hpp"
