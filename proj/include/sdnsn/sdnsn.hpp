#pragma once

#include "sdnsn/agent.hpp"
#include "sdnsn/controller.hpp"
#include "sdnsn/core.hpp"
#include "sdnsn/env.hpp"
#include "sdnsn/name.hpp"
#include "sdnsn/packets.hpp"
#include "sdnsn/scenario.hpp"
#include "sdnsn/service.hpp"
#include "sdnsn/simnet.hpp"
#include "sdnsn/tables.hpp"
