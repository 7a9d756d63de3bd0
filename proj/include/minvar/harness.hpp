#pragma once

#include "minvar/harness/campaigns.hpp"
#include "minvar/harness/identity_campaign.hpp"
#include "minvar/harness/plan.hpp"
#include "minvar/harness/report.hpp"
