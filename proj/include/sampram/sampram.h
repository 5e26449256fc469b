// Copyright 2026 The sampram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SAMPRAM_SAMPRAM_H_
#define SAMPRAM_SAMPRAM_H_

#include "sampram/calculus.h"
#include "sampram/data.h"
#include "sampram/domain.h"
#include "sampram/experiments.h"
#include "sampram/oracle.h"
#include "sampram/otp.h"
#include "sampram/pram.h"
#include "sampram/protocol.h"
#include "sampram/rng.h"
#include "sampram/sampling.h"
#include "sampram/type_stats.h"
#include "sampram/wire.h"

#endif  // SAMPRAM_SAMPRAM_H_
