#include <stdio.h>
#include <stdlib.h>
#include "conic_dsrg.h"

int main(void) {
  CdsField *field = NULL;
  CdsDigraph *da = NULL, *db = NULL, *dt = NULL;
  int32_t pass = -1, isomorphic = -1;
  uint64_t order = 0;
  uint32_t classes = 0, survivors = 0;

  if (cds_field_parse("e=3,mod=0xB", &field) != CDS_OK) {
    fprintf(stderr, "field: %s\n", cds_last_error());
    return 1;
  }
  printf("q = %u\n", cds_field_order(field));
  if (cds_delta_build(field, 'A', &da) != CDS_OK ||
      cds_delta_build(field, 'B', &db) != CDS_OK) {
    fprintf(stderr, "delta: %s\n", cds_last_error());
    return 1;
  }
  cds_verify_dsrg(da, 63, 11, 8, 1, 2, &pass);
  printf("delta A dsrg(63,11,8,1,2): %s\n", pass ? "PASS" : "FAIL");
  cds_isomorphic(da, db, &isomorphic);
  printf("A ~ B: %d\n", isomorphic);
  cds_digraph_transpose(da, &dt);
  cds_isomorphic(db, dt, &isomorphic);
  printf("B ~ A^T: %d\n", isomorphic);
  cds_automorphism_order(da, &order);
  printf("|Aut| = %llu\n", (unsigned long long)order);
  cds_search_classes(field, &classes, &survivors);
  printf("classes = %u survivors = %u\n", classes, survivors);
  cds_digraph_free(dt); cds_digraph_free(da); cds_digraph_free(db);
  cds_field_free(field);
  return 0;
}
