#pragma once

#include "netcode/errors.hpp"
#include "netcode/field.hpp"
#include "netcode/polynomial.hpp"
#include "netcode/matrix.hpp"
#include "netcode/network.hpp"
#include "netcode/paths.hpp"
#include "netcode/gns.hpp"
#include "netcode/assignment.hpp"
#include "netcode/transfer.hpp"
#include "netcode/decomposition.hpp"
#include "netcode/code.hpp"
#include "netcode/feasibility.hpp"
#include "netcode/zero_error.hpp"
#include "netcode/io.hpp"
#include "netcode/report.hpp"
