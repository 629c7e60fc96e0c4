/* Copyright 2026 The tenbed Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <string_view>

namespace tenbed {

// Byte-for-byte copy of data/paper_tables.tsv (a unit test keeps them in sync).
inline constexpr std::string_view kPaperTablesTsv = R"tsv(# Published embedding-layer configurations and their reported #Emb (millions).
# '-' marks a field that does not apply to the method.
table	dataset	setting	method	V	d	n	r	q	M	vocab_shape	dim_shape	reported_emb_M
translation_baselines	De-En/src	-	original	8848	512	-	-	-	-	-	-	4.53
translation_baselines	De-En/src	20x	matrix_factor	8848	512	-	25	-	-	-	-	0.23
translation_baselines	De-En/src	40x	matrix_factor	8848	512	-	12	-	-	-	-	0.11
translation_baselines	De-En/src	20x	tensor_train	8848	512	3	34	-	-	18x20x25	8x8x8	0.20
translation_baselines	De-En/src	40x	tensor_train	8848	512	3	23	-	-	18x20x25	8x8x8	0.09
translation_baselines	De-En/tgt	-	original	6632	512	-	-	-	-	-	-	3.40
translation_baselines	De-En/tgt	20x	matrix_factor	6632	512	-	25	-	-	-	-	0.19
translation_baselines	De-En/tgt	40x	matrix_factor	6632	512	-	12	-	-	-	-	0.09
translation_baselines	De-En/tgt	20x	tensor_train	6632	512	3	34	-	-	14x20x25	8x8x8	0.19
translation_baselines	De-En/tgt	40x	tensor_train	6632	512	3	23	-	-	14x20x25	8x8x8	0.09
translation_baselines	En-It	-	original	41280	512	-	-	-	-	-	-	21.14
translation_baselines	En-It	20x	matrix_factor	41280	512	-	25	-	-	-	-	1.04
translation_baselines	En-It	40x	matrix_factor	41280	512	-	12	-	-	-	-	0.50
translation_baselines	En-It	20x	tensor_train	41280	512	3	59	-	-	30x35x40	8x8x8	1.01
translation_baselines	En-It	40x	tensor_train	41280	512	3	41	-	-	30x35x40	8x8x8	0.49
translation_baselines	En-Es	-	original	41336	512	-	-	-	-	-	-	21.16
translation_baselines	En-Es	20x	matrix_factor	41336	512	-	25	-	-	-	-	1.05
translation_baselines	En-Es	40x	matrix_factor	41336	512	-	12	-	-	-	-	0.50
translation_baselines	En-Es	20x	tensor_train	41336	512	3	59	-	-	30x35x40	8x8x8	1.01
translation_baselines	En-Es	40x	tensor_train	41336	512	3	41	-	-	30x35x40	8x8x8	0.49
translation_baselines	En-Ru	-	original	42000	512	-	-	-	-	-	-	21.50
translation_baselines	En-Ru	20x	matrix_factor	42000	512	-	25	-	-	-	-	1.06
translation_baselines	En-Ru	40x	matrix_factor	42000	512	-	12	-	-	-	-	0.51
translation_baselines	En-Ru	20x	tensor_train	42000	512	3	59	-	-	30x35x40	8x8x8	1.01
translation_baselines	En-Ru	40x	tensor_train	42000	512	3	43	-	-	30x35x40	8x8x8	0.54
translation_tensorized	De-En/src	20x	word2ketxs	8848	512	2	44	-	-	95x95	16x32	0.20
translation_tensorized	De-En/src	40x	word2ketxs	8848	512	2	22	-	-	95x95	16x32	0.10
translation_tensorized	De-En/src	20x	word2ket	8848	512	3	1	8	-	-	-	0.21
translation_tensorized	De-En/src	20x	morphte	8848	512	3	7	8	3013	-	-	0.20
translation_tensorized	De-En/src	40x	morphte	8848	512	3	3	8	3013	-	-	0.10
translation_tensorized	De-En/tgt	20x	word2ketxs	6632	512	2	44	-	-	82x82	16x32	0.17
translation_tensorized	De-En/tgt	40x	word2ketxs	6632	512	2	22	-	-	82x82	16x32	0.09
translation_tensorized	De-En/tgt	20x	word2ket	6632	512	3	1	8	-	-	-	0.16
translation_tensorized	De-En/tgt	20x	morphte	6632	512	3	7	8	2744	-	-	0.17
translation_tensorized	De-En/tgt	40x	morphte	6632	512	3	3	8	2744	-	-	0.08
translation_tensorized	En-It	20x	word2ketxs	41280	512	2	104	-	-	205x205	16x32	1.02
translation_tensorized	En-It	40x	word2ketxs	41280	512	2	50	-	-	205x205	16x32	0.49
translation_tensorized	En-It	20x	word2ket	41280	512	3	1	8	-	-	-	0.99
translation_tensorized	En-It	20x	morphte	41280	512	3	10	8	10818	-	-	0.99
translation_tensorized	En-It	40x	morphte	41280	512	3	4	8	10818	-	-	0.45
translation_tensorized	En-Es	20x	word2ketxs	41336	512	2	104	-	-	205x205	16x32	1.02
translation_tensorized	En-Es	40x	word2ketxs	41336	512	2	50	-	-	205x205	16x32	0.49
translation_tensorized	En-Es	20x	word2ket	41336	512	3	1	8	-	-	-	0.99
translation_tensorized	En-Es	20x	morphte	41336	512	3	10	8	11377	-	-	1.03
translation_tensorized	En-Es	40x	morphte	41336	512	3	4	8	11377	-	-	0.49
translation_tensorized	En-Ru	20x	word2ketxs	42000	512	2	104	-	-	205x205	16x32	1.02
translation_tensorized	En-Ru	40x	word2ketxs	42000	512	2	53	-	-	205x205	16x32	0.52
translation_tensorized	En-Ru	20x	word2ket	42000	512	3	1	8	-	-	-	1.01
translation_tensorized	En-Ru	20x	morphte	42000	512	3	9	8	12423	-	-	1.02
translation_tensorized	En-Ru	40x	morphte	42000	512	3	4	8	12423	-	-	0.52
qa_nli_baselines	WikiQA	-	original	12333	512	-	-	-	-	-	-	6.314
qa_nli_baselines	WikiQA	-	matrix_factor	12333	512	-	6	-	-	-	-	0.077
qa_nli_baselines	WikiQA	-	tensor_train	12333	512	3	19	-	-	20x25x26	8x8x8	0.079
qa_nli_baselines	SNLI	-	original	16936	512	-	-	-	-	-	-	8.671
qa_nli_baselines	SNLI	-	matrix_factor	16936	512	-	13	-	-	-	-	0.227
qa_nli_baselines	SNLI	-	tensor_train	16936	512	3	33	-	-	25x25x32	8x8x8	0.233
qa_nli_tensorized	WikiQA	-	word2ketxs	12333	512	3	137	-	-	24x24x24	8x8x8	0.079
qa_nli_tensorized	WikiQA	-	word2ket	12333	512	3	1	8	-	-	-	0.296
qa_nli_tensorized	WikiQA	-	morphte	12333	512	3	1	8	5152	-	-	0.078
qa_nli_tensorized	SNLI	-	word2ketxs	16936	512	3	260	-	-	8x29x73	8x8x8	0.229
qa_nli_tensorized	SNLI	-	word2ket	16936	512	3	1	8	-	-	-	0.406
qa_nli_tensorized	SNLI	-	morphte	16936	512	3	4	8	5572	-	-	0.229
translation_summary	De-En	-	original	15480	512	-	-	-	-	-	-	7.93
translation_summary	De-En	20x	morphte	15480	512	3	7	8	5757	-	-	0.37
translation_summary	De-En	40x	morphte	15480	512	3	3	8	5757	-	-	0.18
translation_summary	En-It	-	original	41280	512	-	-	-	-	-	-	21.14
translation_summary	En-It	20x	morphte	41280	512	3	10	8	10818	-	-	0.99
translation_summary	En-It	40x	morphte	41280	512	3	4	8	10818	-	-	0.45
translation_summary	En-Es	-	original	41336	512	-	-	-	-	-	-	21.16
translation_summary	En-Es	20x	morphte	41336	512	3	10	8	11377	-	-	1.03
translation_summary	En-Es	40x	morphte	41336	512	3	4	8	11377	-	-	0.49
translation_summary	En-Ru	-	original	42000	512	-	-	-	-	-	-	21.50
translation_summary	En-Ru	20x	morphte	42000	512	3	9	8	12423	-	-	1.02
translation_summary	En-Ru	40x	morphte	42000	512	3	4	8	12423	-	-	0.52
)tsv";

}  // namespace tenbed
