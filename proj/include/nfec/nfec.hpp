// SPDX-License-Identifier: Apache-2.0
//
// nfec - effective capacity analysis for joint near-field/far-field links
// Copyright (C) 2026 The nfec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "params.hpp"
#include "numerics.hpp"
#include "capacity.hpp"
#include "ranging.hpp"
#include "regime_markov.hpp"
#include "ec_engine.hpp"
#include "montecarlo.hpp"
#include "crlb_toa.hpp"
#include "config.hpp"
#include "validation.hpp"
#include "experiments.hpp"
