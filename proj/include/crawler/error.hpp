// Copyright 2026 The Origami Crawler Authors
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

#include <stdexcept>
#include <string>

namespace crawler {

// Base of every error raised by the library. Each subclass names one failure
// mode so callers can catch exactly what they can recover from.
class CrawlerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CRAWLER_DEFINE_ERROR(Name)                                  \
  class Name : public CrawlerError {                                \
   public:                                                          \
    explicit Name(const std::string& what) : CrawlerError(what) {}  \
  }

CRAWLER_DEFINE_ERROR(InvalidDesign);
CRAWLER_DEFINE_ERROR(DegenerateCrease);
CRAWLER_DEFINE_ERROR(NoClosure);
CRAWLER_DEFINE_ERROR(BranchJump);
CRAWLER_DEFINE_ERROR(FacetCollision);
CRAWLER_DEFINE_ERROR(NoStablePose);
CRAWLER_DEFINE_ERROR(Unstable);
CRAWLER_DEFINE_ERROR(Degenerate);
CRAWLER_DEFINE_ERROR(NoAnchor);
CRAWLER_DEFINE_ERROR(NoRoot);
CRAWLER_DEFINE_ERROR(TooShort);
CRAWLER_DEFINE_ERROR(SchemaMismatch);
CRAWLER_DEFINE_ERROR(FormatError);
CRAWLER_DEFINE_ERROR(IoError);

#undef CRAWLER_DEFINE_ERROR

}  // namespace crawler
