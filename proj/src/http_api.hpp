/*
 * http_api.hpp
 *
 * This source file is part of the succor project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <memory>

#include "succor/wire.hpp"

namespace succor {

class Service;

// HTTP adapters over Service. Kept out of the public headers so only one
// translation unit pulls in the HTTP library.
class HttpFrontend {
public:
    explicit HttpFrontend(Service& service);
    ~HttpFrontend();

    /// Binds and starts serving on a background thread; returns the bound port.
    std::uint16_t start(const wire::Endpoint& listen);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

int http_status_for(Errc code) noexcept;

} // namespace succor
