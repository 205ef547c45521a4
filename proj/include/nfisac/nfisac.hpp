// SPDX-License-Identifier: Apache-2.0
//
// nfisac: near-field wideband ISAC beamforming simulation library
// Copyright (C) 2026 The nfisac authors
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

#include "nfisac/core/channel.hpp"
#include "nfisac/core/geometry.hpp"
#include "nfisac/core/parallel.hpp"
#include "nfisac/core/random.hpp"
#include "nfisac/core/steering.hpp"
#include "nfisac/core/types.hpp"

#include "nfisac/codebook/classic.hpp"
#include "nfisac/codebook/codeword.hpp"
#include "nfisac/codebook/fairness.hpp"
#include "nfisac/codebook/serialization.hpp"
#include "nfisac/ttd.hpp"

#include "nfisac/combiner.hpp"

#include "nfisac/radar/detection.hpp"
#include "nfisac/radar/echo.hpp"
#include "nfisac/radar/map.hpp"

#include "nfisac/eval/combiners.hpp"
#include "nfisac/eval/coverage.hpp"
#include "nfisac/eval/scenario.hpp"
#include "nfisac/eval/sensing.hpp"
#include "nfisac/eval/throughput.hpp"

#include "nfisac/app/config.hpp"
#include "nfisac/app/report.hpp"
