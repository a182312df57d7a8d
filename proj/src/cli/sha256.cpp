// SPDX-License-Identifier: Apache-2.0
//
// amafris - array-fed reflective surface channel modelling and system simulation
// Copyright (C) 2026 The amafris authors
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

#include "amafris/cli.hpp"
#include "amafris/types.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace amafris::cli
{
    namespace
    {
        struct DigestDeleter
        {
            void operator()(EVP_MD_CTX *ctx) const { EVP_MD_CTX_free(ctx); }
        };

        class Sha256
        {
        public:
            Sha256() : ctx_(EVP_MD_CTX_new())
            {
                if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
                    throw std::runtime_error("sha256: digest initialisation failed");
            }
            void update(const char *data, std::size_t n)
            {
                if (EVP_DigestUpdate(ctx_.get(), data, n) != 1)
                    throw std::runtime_error("sha256: digest update failed");
            }
            std::string hex()
            {
                std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
                unsigned int len = 0;
                if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1)
                    throw std::runtime_error("sha256: digest finalisation failed");
                static const char digits[] = "0123456789abcdef";
                std::string out;
                out.reserve(2 * len);
                for (unsigned int i = 0; i < len; ++i)
                {
                    out += digits[md[i] >> 4];
                    out += digits[md[i] & 0xF];
                }
                return out;
            }

        private:
            std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx_;
        };
    }

    std::string sha256_hex(const std::string &bytes)
    {
        Sha256 h;
        h.update(bytes.data(), bytes.size());
        return h.hex();
    }

    std::string sha256_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ValidationError("cannot open '" + path.string() + "'");
        Sha256 h;
        std::array<char, 1 << 16> buf{};
        while (in)
        {
            in.read(buf.data(), buf.size());
            h.update(buf.data(), std::size_t(in.gcount()));
        }
        return h.hex();
    }
}
