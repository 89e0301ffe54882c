// Copyright 2026 The corpusforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "corpusforge/cluster.hpp"
#include "corpusforge/dedup.hpp"
#include "corpusforge/dump.hpp"
#include "corpusforge/encode.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/fetch.hpp"
#include "corpusforge/ingest.hpp"
#include "corpusforge/io.hpp"
#include "corpusforge/knee.hpp"
#include "corpusforge/minhash.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/records.hpp"
#include "corpusforge/stages.hpp"
#include "corpusforge/stats.hpp"
#include "corpusforge/wikitext/clean.hpp"
