#pragma once

#include "storshare/common.hpp"
#include "storshare/community.hpp"
#include "storshare/cost.hpp"
#include "storshare/game.hpp"
#include "storshare/loads.hpp"
#include "storshare/report.hpp"
#include "storshare/serialize.hpp"
#include "storshare/settlement.hpp"
#include "storshare/simulation.hpp"
#include "storshare/synthetic.hpp"
#include "storshare/tariff.hpp"
