// SPDX-License-Identifier: Apache-2.0
//
// rvqlab: limited-feedback beamforming loss analysis for RVQ codebooks
// Copyright (C) 2026 rvqlab contributors
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

#ifndef RVQLAB_ERRORS_HPP
#define RVQLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rvqlab
{
    // Base of every error thrown by the library
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

#define RVQLAB_ERROR(Name, Base)          \
    class Name : public Base              \
    {                                     \
    public:                               \
        using Base::Base;                 \
    };

    RVQLAB_ERROR(PreconditionError, Error)
    RVQLAB_ERROR(DomainError, Error)
    RVQLAB_ERROR(DegenerateSpectrumError, Error)
    RVQLAB_ERROR(UnsupportedError, Error)
    RVQLAB_ERROR(UnsupportedRegionError, UnsupportedError)
    RVQLAB_ERROR(SingularSkewError, Error)
    RVQLAB_ERROR(SingularCovarianceError, Error)
    RVQLAB_ERROR(ResourceLimitError, Error)
    RVQLAB_ERROR(ZeroChannelError, Error)
    RVQLAB_ERROR(InstabilityGuardError, Error)

#undef RVQLAB_ERROR

    // Configuration problems carry the JSON path of the offending field
    class ConfigError : public Error
    {
    public:
        ConfigError(const std::string &field_path, const std::string &message)
            : Error(field_path + ": " + message), field_path_(field_path) {}
        const std::string &field_path() const noexcept { return field_path_; }

    private:
        std::string field_path_;
    };
}

#endif
