// spkfuse/spkfuse.h

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKFUSE_SPKFUSE_H_
#define SPKFUSE_SPKFUSE_H_

#include "spkfuse/error.h"
#include "spkfuse/features.h"
#include "spkfuse/fusion.h"
#include "spkfuse/matrix.h"
#include "spkfuse/metrics.h"
#include "spkfuse/random.h"
#include "spkfuse/scoring.h"
#include "spkfuse/synth.h"
#include "spkfuse/trial_io.h"
#include "spkfuse/tsne.h"

#endif  // SPKFUSE_SPKFUSE_H_
