pub mod ls_oracle;
