#pragma once

#include "tm2/agent.hpp"
#include "tm2/agents/catalog.hpp"
#include "tm2/agents/classifier.hpp"
#include "tm2/agents/features.hpp"
#include "tm2/agents/models.hpp"
#include "tm2/agents/registry.hpp"
#include "tm2/annotation.hpp"
#include "tm2/blackboard.hpp"
#include "tm2/dsl.hpp"
#include "tm2/engine.hpp"
#include "tm2/errors.hpp"
#include "tm2/evaluation.hpp"
#include "tm2/experiment.hpp"
#include "tm2/export/dot.hpp"
#include "tm2/export/report.hpp"
#include "tm2/export/xcdl.hpp"
#include "tm2/export/xml.hpp"
#include "tm2/interaction.hpp"
#include "tm2/payloads.hpp"
#include "tm2/query.hpp"
#include "tm2/resource.hpp"
#include "tm2/value.hpp"
